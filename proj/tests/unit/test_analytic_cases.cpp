#include <cmath>
#include <numbers>

#include "doctest.h"
#include "hullmeter/analytic_cases.hpp"
#include "hullmeter/error.hpp"
#include "hullmeter/separability_bounds.hpp"

using namespace hullmeter;

namespace {

std::vector<double> theta_grid(int n) {
  std::vector<double> g;
  for (int k = 0; k < n; ++k) g.push_back(k * (std::numbers::pi / 2) / (n - 1));
  return g;
}

}  // namespace

TEST_CASE("closed-form alpha") {
  CHECK(ghz_alpha(std::numbers::pi / 4) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(ghz_alpha(0.0) == 1.0);
  CHECK(ghz_alpha(std::numbers::pi / 8) == doctest::Approx(1.0 / (1.0 + std::sqrt(2.0))).epsilon(1e-15));
  CHECK_THROWS_AS(ghz_alpha(-0.3), ValidationError);
  CHECK_THROWS_AS(ghz_certificate(2.0), ValidationError);
}

TEST_CASE("certificate tables are product vectors on the tangent plane") {
  const auto b = build_basis({2, 2});
  const auto l = ghz_witness(b);
  const auto cert = ghz_certificate(0.3, b);
  REQUIRE(cert.terms.size() == 6);
  const auto tables = ghz_certificate_tables();
  for (std::size_t k = 0; k < 6; ++k) {
    const Eigen::VectorXd r = b->product_vector(cert.terms[k].state.factors());
    CHECK(l.components.dot(r) == doctest::Approx(1.0).epsilon(1e-14));
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        if (i == 0 && j == 0) continue;
        const int lbl[2] = {i, j};
        CHECK(std::abs(r[b->index_of(lbl)] - tables[k](i, j)) < 1e-14);
      }
  }
}

TEST_CASE("certificate reconstructs the state on a 50-point grid") {
  const auto b = build_basis({2, 2});
  for (double t : theta_grid(50)) {
    const auto cert = ghz_certificate(t, b);
    CHECK(cert.residual() <= 1e-12);
    CHECK(std::abs(cert.weight_sum() - (1.0 + 2.0 * std::sin(2 * t))) <= 1e-12);
    CHECK(std::abs(alpha_from_certificate(cert) - ghz_alpha(t)) <= 1e-12);
    CHECK(verify_certificate(cert, ghz_witness(b), 1.0));
    CHECK(std::abs(ppt_boundary_V(ghz_theta(t)).V_star - ghz_alpha(t)) <= 1e-8);
  }
}

TEST_CASE("solver reproduces the closed form on a 50-point grid") {
  for (double t : theta_grid(50)) {
    CAPTURE(t);
    const auto r = estimate_alpha(ghz_theta(t));
    CHECK(std::abs(r.alpha - ghz_alpha(t)) <= 1e-3);
  }
}
