#include "hullmeter/analytic_cases.hpp"

#include <cmath>

#include "hullmeter/error.hpp"

namespace hullmeter {

namespace {

double checked_sin2(double theta) {
  const double s = std::sin(2.0 * theta);
  if (s < -1e-15) throw ValidationError("closed form covers sin(2 theta) >= 0 only; reflect theta first");
  return std::max(0.0, s);
}

void require_two_qubits(const BasisPtr& basis) {
  if (!basis || !basis->is_tensor_product() || basis->dims() != Dims{2, 2})
    throw ValidationError("closed form needs the two-qubit tensor basis");
}

Eigen::Matrix4d table(std::initializer_list<double> rows) {
  Eigen::Matrix4d m;
  auto it = rows.begin();
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) m(i, j) = *it++;
  return m;
}

}  // namespace

double ghz_alpha(double theta) { return 1.0 / (1.0 + 2.0 * checked_sin2(theta)); }

WitnessDirection ghz_witness(const BasisPtr& basis) {
  require_two_qubits(basis);
  Eigen::VectorXd l = Eigen::VectorXd::Zero(basis->size());
  const int xx[2] = {1, 1}, yy[2] = {2, 2}, zz[2] = {3, 3};
  l[basis->index_of(xx)] = 1.0;
  l[basis->index_of(yy)] = -1.0;
  l[basis->index_of(zz)] = 1.0;
  return {basis, l};
}

std::array<Eigen::Matrix4d, 6> ghz_certificate_tables() {
  // clang-format off
  return {
      table({1,  1,  0,  0,
             1,  1,  0,  0,
             0,  0,  0,  0,
             0,  0,  0,  0}),
      table({1, -1,  0,  0,
            -1,  1,  0,  0,
             0,  0,  0,  0,
             0,  0,  0,  0}),
      table({1,  0, -1,  0,
             0,  0,  0,  0,
             1,  0, -1,  0,
             0,  0,  0,  0}),
      table({1,  0,  1,  0,
             0,  0,  0,  0,
            -1,  0, -1,  0,
             0,  0,  0,  0}),
      table({1,  0,  0,  1,
             0,  0,  0,  0,
             0,  0,  0,  0,
             1,  0,  0,  1}),
      table({1,  0,  0, -1,
             0,  0,  0,  0,
             0,  0,  0,  0,
            -1,  0,  0,  1}),
  };
  // clang-format on
}

DecompositionCertificate ghz_certificate(double theta, const BasisPtr& basis) {
  require_two_qubits(basis);
  const double s2 = checked_sin2(theta);
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const double weights[6] = {s2 / 2, s2 / 2, s2 / 2, s2 / 2, c * c, s * s};

  const auto tables = ghz_certificate_tables();
  DecompositionCertificate cert{.terms = {}, .target = vectorize(ghz_theta(theta), basis)};
  for (int k = 0; k < 6; ++k) {
    const Eigen::Matrix4d& t = tables[k];
    // First column: first party's Bloch vector; first row: second party's.
    const Eigen::Vector3d v = t.col(0).tail<3>();
    const Eigen::Vector3d u = t.row(0).tail<3>().transpose();
    Eigen::Vector4d va, ua;
    va << 1.0, v;
    ua << 1.0, u;
    if (std::abs(v.norm() - 1.0) > 1e-12 || std::abs(u.norm() - 1.0) > 1e-12 ||
        (va * ua.transpose() - t).cwiseAbs().maxCoeff() > 1e-12)
      throw ValidationError("certificate table " + std::to_string(k + 1) + " is not a product vector");
    const Eigen::Vector3d bloch[2] = {v, u};
    cert.terms.push_back({weights[k], ProductPureState::from_bloch(bloch)});
  }
  return cert;
}

}  // namespace hullmeter
