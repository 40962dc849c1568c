#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "hullmeter/bloch_basis.hpp"
#include "hullmeter/error.hpp"
#include "hullmeter/quantum_states.hpp"

using namespace hullmeter;

namespace {

Eigen::VectorXcd ket(std::initializer_list<cplx> a) {
  Eigen::VectorXcd v(a.size());
  int i = 0;
  for (cplx x : a) v[i++] = x;
  return v;
}

}  // namespace

TEST_CASE("product_state Bloch vectors") {
  const auto p00 = product_state({ket({1, 0}), ket({1, 0})});
  const auto bv = p00.bloch_vectors();
  CHECK((bv[0] - Eigen::Vector3d(0, 0, 1)).norm() < 1e-15);
  CHECK((bv[1] - Eigen::Vector3d(0, 0, 1)).norm() < 1e-15);
  CHECK(p00.projector().matrix()(0, 0).real() == doctest::Approx(1.0));

  const double s = 1.0 / std::sqrt(2.0);
  const auto plus0 = product_state({ket({s, s}), ket({1, 0})});
  CHECK((plus0.bloch_vectors()[0] - Eigen::Vector3d(1, 0, 0)).norm() < 1e-15);
  CHECK((plus0.bloch_vectors()[1] - Eigen::Vector3d(0, 0, 1)).norm() < 1e-15);

  CHECK_THROWS_AS(product_state({ket({0, 0}), ket({1, 0})}), ValidationError);
}

TEST_CASE("two-qubit product vectors follow the outer-product pattern") {
  const auto b = build_basis({2, 2});
  std::mt19937_64 rng(11);
  for (int k = 0; k < 50; ++k) {
    const auto psi = random_product({2, 2}, rng);
    for (const auto& f : psi.factors()) CHECK(std::abs(f.norm() - 1.0) < 1e-12);
    const auto bv = psi.bloch_vectors();
    const Eigen::VectorXd v = bv[0], u = bv[1];
    CHECK(std::abs(v.norm() - 1.0) < 1e-10);
    CHECK(std::abs(u.norm() - 1.0) < 1e-10);
    const auto R = vectorize(psi.projector(), b);
    double err = 0.0;
    for (int j = 1; j < 4; ++j) err = std::max(err, std::abs(R.table(0, j) - u[j - 1]));
    for (int i = 1; i < 4; ++i) err = std::max(err, std::abs(R.table(i, 0) - v[i - 1]));
    for (int i = 1; i < 4; ++i)
      for (int j = 1; j < 4; ++j) err = std::max(err, std::abs(R.table(i, j) - v[i - 1] * u[j - 1]));
    CHECK(err < 1e-10);
  }
}

TEST_CASE("from_bloch inverts bloch_vectors") {
  std::mt19937_64 rng(4);
  for (int k = 0; k < 20; ++k) {
    const auto psi = random_product({2, 2}, rng);
    const auto bv = psi.bloch_vectors();
    const Eigen::Vector3d arr[2] = {bv[0], bv[1]};
    const auto back = ProductPureState::from_bloch(arr);
    CHECK(std::norm(back.state_vector().dot(psi.state_vector())) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("ghz_theta vectorizes to the closed-form table on a 50-point grid") {
  const auto b = build_basis({2, 2});
  double worst = 0.0;
  for (int k = 0; k < 50; ++k) {
    const double t = k * (std::numbers::pi / 2) / 49;
    const auto R = vectorize(ghz_theta(t), b);
    Eigen::Matrix4d expect = Eigen::Matrix4d::Zero();
    expect(0, 0) = 1.0;
    expect(0, 3) = expect(3, 0) = std::cos(2 * t);
    expect(1, 1) = std::sin(2 * t);
    expect(2, 2) = -std::sin(2 * t);
    expect(3, 3) = 1.0;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) worst = std::max(worst, std::abs(R.table(i, j) - expect(i, j)));
  }
  CHECK(worst <= 1e-12);

  const auto R8 = vectorize(ghz_theta(std::numbers::pi / 8), b);
  CHECK(R8.table(0, 3) == doctest::Approx(std::sqrt(2.0) / 2));
  CHECK(R8.table(1, 1) == doctest::Approx(std::sqrt(2.0) / 2));
}

TEST_CASE("werner_mix is linear in the correlation vector") {
  const auto b = build_basis({2, 3});
  std::mt19937_64 rng(8);
  for (int k = 0; k < 10; ++k) {
    const auto rho = random_density({2, 3}, rng);
    const double V = std::uniform_real_distribution<double>(0, 1)(rng);
    const Eigen::VectorXd lhs = vectorize(werner_mix(rho, V), b).components;
    const Eigen::VectorXd rhs = V * vectorize(rho, b).components;
    CHECK((lhs - rhs).lpNorm<Eigen::Infinity>() <= 1e-12);
  }
  const auto bell = ghz_theta(std::numbers::pi / 4);
  CHECK((werner_mix(bell, 1.0).matrix() - bell.matrix()).cwiseAbs().maxCoeff() == 0.0);
  CHECK((werner_mix(bell, 0.0).matrix() - Eigen::MatrixXcd::Identity(4, 4) / 4.0).cwiseAbs().maxCoeff() < 1e-15);
  CHECK_THROWS_AS(werner_mix(bell, 1.5), ValidationError);
  CHECK_THROWS_AS(werner_mix(bell, -0.1), ValidationError);
}

TEST_CASE("random generators are deterministic and valid") {
  CHECK((random_density({2, 2}, 5).matrix() - random_density({2, 2}, 5).matrix()).cwiseAbs().maxCoeff() == 0.0);
  CHECK((random_density({2, 2}, 5).matrix() - random_density({2, 2}, 6).matrix()).cwiseAbs().maxCoeff() > 0.0);
  std::mt19937_64 rng(1);
  for (int k = 0; k < 1000; ++k) {
    const auto rho = random_density(k % 2 ? Dims{2, 2} : Dims{2, 3}, rng);
    CHECK(hermiticity_error(rho.matrix()) <= kHermitianTol);
  }
  Eigen::MatrixXcd u = random_unitary(3, rng);
  CHECK((u.adjoint() * u - Eigen::MatrixXcd::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("density matrix validation") {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(4, 4) / 4.0;
  CHECK_NOTHROW(DensityMatrix({2, 2}, m));
  CHECK_THROWS_AS(DensityMatrix({2, 3}, m), ValidationError);
  Eigen::MatrixXcd bad = m;
  bad(0, 1) = 0.1;
  CHECK_THROWS_AS(DensityMatrix({2, 2}, bad), ValidationError);
  bad = 2.0 * m;
  CHECK_THROWS_AS(DensityMatrix({2, 2}, bad), ValidationError);
  bad = m;
  bad(0, 0) = -0.25;
  bad(1, 1) = 0.75;
  CHECK_THROWS_AS(DensityMatrix({2, 2}, bad), ValidationError);
}

TEST_CASE("local unitaries and mixtures") {
  std::mt19937_64 rng(12);
  const auto rho = random_density({2, 3}, rng);
  const std::vector<Eigen::MatrixXcd> us{random_unitary(2, rng), random_unitary(3, rng)};
  const auto out = apply_local_unitaries(rho, us);
  const auto U = kron(us[0], us[1]);
  CHECK((out.matrix() - U * rho.matrix() * U.adjoint()).cwiseAbs().maxCoeff() < 1e-12);

  const std::vector<DensityMatrix> states{random_product({2, 2}, rng).projector(), random_product({2, 2}, rng).projector()};
  const std::vector<double> w{0.25, 0.75};
  const auto m = mix(w, states);
  CHECK((m.matrix() - 0.25 * states[0].matrix() - 0.75 * states[1].matrix()).cwiseAbs().maxCoeff() < 1e-15);
  const std::vector<double> bad{0.5, 0.6};
  CHECK_THROWS_AS(mix(bad, states), ValidationError);
}
