#include <cmath>
#include <cstdlib>
#include <numbers>
#include <random>

#include "doctest.h"
#include "hullmeter/analytic_cases.hpp"
#include "hullmeter/error.hpp"
#include "hullmeter/hull_measure.hpp"
#include "hullmeter/separability_bounds.hpp"

using namespace hullmeter;

namespace {

const DensityMatrix& bell() {
  static const DensityMatrix rho = ghz_theta(std::numbers::pi / 4);
  return rho;
}

void check_result_invariants(const MeasureResult& r, const DensityMatrix& rho) {
  CHECK(r.alpha > 0.0);
  CHECK(r.alpha <= 1.0);
  CHECK(r.C == 1.0 - r.alpha);
  for (double b : r.diagnostics.accepted_betas) CHECK(r.alpha <= b + 1e-12);
  CHECK(r.diagnostics.hull_lower_bound <= r.alpha + 1e-9);
  if (r.accepted_directions > 0) {
    CHECK(r.best_beta == r.alpha);
    const auto R = vectorize(rho, r.best_witness.basis);
    CHECK(std::abs(r.best_F / r.best_witness.dot(R) - r.best_beta) <= 1e-10);
    CHECK(std::abs(r.diagnostics.C_density_form - r.C) <= 1e-8);
  }
}

}  // namespace

TEST_CASE("beta filter") {
  const auto b = build_basis({2, 2});
  const auto l = ghz_witness(b);
  const auto R = vectorize(bell(), b);
  CHECK(l.dot(R) == doctest::Approx(3.0));
  const auto ok = beta(l, R, 1.0);
  CHECK(ok.accepted());
  CHECK(ok.ratio == doctest::Approx(1.0 / 3.0));

  // l.R = 0.5 -> beta = 2
  const WitnessDirection half{b, l.components / 6.0};
  CHECK(beta(half, R, 1.0).reason == Rejection::RatioAtLeastOne);
  const WitnessDirection neg{b, -l.components / 3.0};
  CHECK(beta(neg, R, 1.0).reason == Rejection::NonPositiveDenominator);
  const auto mm = vectorize(DensityMatrix::maximally_mixed({2, 2}), b);
  CHECK(beta(l, mm, 0.0).reason == Rejection::Indeterminate);
  CHECK(beta(l, mm, 1.0).reason == Rejection::ZeroDenominator);
  CHECK(beta(l, R, -0.3).reason == Rejection::NonPositiveRatio);
  CHECK(std::string(to_string(Rejection::RatioAtLeastOne)) == "ratio-at-least-one");
}

TEST_CASE("maximally mixed state short-circuits") {
  for (const Dims& dims : {Dims{2, 2}, Dims{2, 3}}) {
    const auto r = estimate_alpha(DensityMatrix::maximally_mixed(dims));
    CHECK(r.alpha == 1.0);
    CHECK(r.C == 0.0);
    CHECK(r.diagnostics.zero_vector);
  }
}

TEST_CASE("Bell state: alpha = 1/3") {
  const auto r = estimate_alpha(bell());
  CHECK(std::abs(r.alpha - 1.0 / 3.0) <= 1e-6);
  CHECK(r.diagnostics.polish_converged);
  check_result_invariants(r, bell());
  REQUIRE(r.best_argmax);
  CHECK(std::abs(overlap(r.best_witness, *r.best_argmax) - r.best_F) <= 1e-10);
}

TEST_CASE("measure normalization") {
  SolverConfig cfg;
  cfg.normalization = 2.0 / 3.0;
  const auto r = measure(bell(), cfg);
  REQUIRE(r.C_normalized);
  CHECK(*r.C_normalized == doctest::Approx(1.0).epsilon(1e-5));

  const auto p = measure(ghz_theta(0.0), cfg);
  CHECK(p.C == 0.0);
  CHECK(*p.C_normalized == 0.0);
  CHECK(measure(ghz_theta(0.0)).C == 0.0);
  CHECK_FALSE(measure(ghz_theta(0.0)).C_normalized);

  const auto g8 = measure(ghz_theta(std::numbers::pi / 8));
  CHECK(g8.C == doctest::Approx(1.0 - 1.0 / (1.0 + std::sqrt(2.0))).epsilon(1e-5));

  cfg.normalization = 0.0;
  CHECK_THROWS_AS(measure(bell(), cfg), ValidationError);
}

TEST_CASE("config validation") {
  SolverConfig cfg;
  cfg.F_restarts = 0;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
  cfg = {};
  cfg.tol_ratio = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
  cfg = {};
  cfg.dims = {2, 3};
  CHECK_THROWS_AS(estimate_alpha(bell(), cfg), ValidationError);
}

TEST_CASE("random two-qubit states agree with PPT and satisfy the invariants") {
  std::mt19937_64 rng(77);
  for (int k = 0; k < 5; ++k) {
    const auto rho = random_density({2, 2}, rng);
    const auto r = estimate_alpha(rho);
    check_result_invariants(r, rho);
    CHECK(std::abs(r.C - ppt_boundary_V(rho).C_ppt) <= 5e-3);
  }
}

TEST_CASE("PPT dominance beyond the exact regime") {
  const auto rho = random_density({3, 3}, 4);
  const auto r = estimate_alpha(rho);
  CHECK(r.C >= ppt_boundary_V(rho).C_ppt - 5e-3);
}

TEST_CASE("certificate from the polish phase") {
  const auto rho = random_density({2, 2}, 31);
  const auto r = estimate_alpha(rho);
  REQUIRE(r.certificate);
  CHECK(r.certificate->residual() <= 1e-9);
  CHECK(std::abs(alpha_from_certificate(*r.certificate, 1e-9) - r.alpha) <= 5e-3);
}

TEST_CASE("alpha_from_certificate") {
  const auto b = build_basis({2, 2});
  std::mt19937_64 rng(3);
  const auto psi = random_product({2, 2}, rng);
  const DecompositionCertificate single{.terms = {{1.0, psi}}, .target = vectorize(psi.projector(), b)};
  CHECK(alpha_from_certificate(single) == 1.0);

  const double t = std::numbers::pi / 6;
  CHECK(std::abs(alpha_from_certificate(ghz_certificate(t)) - ghz_alpha(t)) <= 1e-12);

  auto broken = ghz_certificate(t);
  broken.terms.pop_back();
  CHECK_THROWS_AS(alpha_from_certificate(broken), ValidationError);
  auto negative = single;
  negative.terms[0].weight = -1.0;
  CHECK_THROWS_AS(alpha_from_certificate(negative), ValidationError);
}

TEST_CASE("verify_certificate") {
  const auto b = build_basis({2, 2});
  const auto l = ghz_witness(b);
  const auto cert = ghz_certificate(std::numbers::pi / 5, b);
  CHECK(verify_certificate(cert, l, 1.0));

  // A term with l.r = 0 while F = 1.
  auto off = cert;
  const Eigen::Vector3d yx[2] = {Eigen::Vector3d(0, 1, 0), Eigen::Vector3d(1, 0, 0)};
  off.terms.push_back({0.1, ProductPureState::from_bloch(yx)});
  CHECK_FALSE(verify_certificate(off, l, 1.0));

  // First term nudged so one table entry moves by about 1e-3.
  auto nudged = cert;
  const Eigen::Vector3d v(1, 0, 0);
  const Eigen::Vector3d u = Eigen::Vector3d(1, 2e-3, 0).normalized();
  const Eigen::Vector3d vu[2] = {v, u};
  nudged.terms[0].state = ProductPureState::from_bloch(vu);
  CHECK_FALSE(verify_certificate(nudged, l, 1.0));

  CHECK_FALSE(verify_certificate(cert, l, 0.9));
}

TEST_CASE("basis independence") {
  const auto rho = random_density({2, 2}, 8);
  const auto canonical = build_basis({2, 2});
  std::mt19937_64 rng(5);
  std::normal_distribution<double> nd;
  Eigen::MatrixXd g(15, 15);
  for (int i = 0; i < 15; ++i)
    for (int j = 0; j < 15; ++j) g(i, j) = nd(rng);
  const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(g).householderQ();
  const auto a = estimate_alpha(rho, canonical);
  const auto b = estimate_alpha(rho, canonical->rotated(q));
  CHECK(std::abs(a.alpha - b.alpha) <= 5e-3);
}

TEST_CASE("batch results match sequential runs for any thread count") {
  std::vector<DensityMatrix> states;
  for (int k = 0; k < 4; ++k) states.push_back(random_density({2, 2}, 100 + k));
  SolverConfig cfg;
  cfg.direction_samples = 512;
  const auto one = measure_batch(states, cfg, 1);
  const auto three = measure_batch(states, cfg, 3);
  for (std::size_t i = 0; i < states.size(); ++i) {
    CHECK(one[i].alpha == three[i].alpha);
    CHECK(one[i].alpha == measure(states[i], cfg).alpha);
  }
}

TEST_CASE("thread budget honours HULLMETER_THREADS") {
  ::setenv("HULLMETER_THREADS", "3", 1);
  CHECK(thread_budget() == 3);
  ::setenv("HULLMETER_THREADS", "junk", 1);
  CHECK(thread_budget() >= 1);
  ::unsetenv("HULLMETER_THREADS");
  CHECK(thread_budget() >= 1);
}

TEST_CASE("determinism under a fixed seed") {
  const auto rho = random_density({2, 2}, 55);
  const auto a = estimate_alpha(rho);
  const auto b = estimate_alpha(rho);
  CHECK(a.alpha == b.alpha);
  CHECK((a.best_witness.components - b.best_witness.components).norm() == 0.0);
}
