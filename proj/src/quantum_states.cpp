#include "hullmeter/quantum_states.hpp"

#include <cmath>
#include <string>

#include "hullmeter/error.hpp"

namespace hullmeter {

double hermiticity_error(const Eigen::MatrixXcd& m) { return (m - m.adjoint()).cwiseAbs().maxCoeff(); }

double min_eigenvalue(const Eigen::MatrixXcd& m) {
  const Eigen::MatrixXcd h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues()[0];
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

DensityMatrix::DensityMatrix(Dims dims, Eigen::MatrixXcd matrix) : dims_(std::move(dims)), matrix_(std::move(matrix)) {
  for (int k : dims_)
    if (k < 2) throw ValidationError("subsystem dimension must be >= 2");
  const int d = total_dim(dims_);
  if (matrix_.rows() != d || matrix_.cols() != d)
    throw ValidationError("matrix is " + std::to_string(matrix_.rows()) + "x" + std::to_string(matrix_.cols()) +
                          " but dims imply " + std::to_string(d));
  if (!matrix_.allFinite()) throw ValidationError("matrix has non-finite entries");
  const double herm = hermiticity_error(matrix_);
  if (herm > kHermitianTol) throw ValidationError("matrix is not Hermitian (error " + std::to_string(herm) + ")");
  const double tr_err = std::abs(matrix_.trace() - cplx(1.0, 0.0));
  if (tr_err > kTraceTol) throw ValidationError("trace differs from 1 by " + std::to_string(tr_err));
  const double lmin = min_eigenvalue(matrix_);
  if (lmin < -kPsdTol) throw ValidationError("matrix has negative eigenvalue " + std::to_string(lmin));
}

DensityMatrix DensityMatrix::maximally_mixed(const Dims& dims) {
  const int d = total_dim(dims);
  return DensityMatrix(dims, Eigen::MatrixXcd::Identity(d, d) / static_cast<double>(d));
}

namespace {

Eigen::VectorXcd normalize_with_phase(Eigen::VectorXcd v) {
  const double n = v.norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw ValidationError("subsystem vector is zero or non-finite");
  v /= n;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) > 1e-14) {
      v *= std::conj(v[i]) / std::abs(v[i]);
      v[i] = std::abs(v[i]);
      break;
    }
  }
  return v;
}

}  // namespace

ProductPureState::ProductPureState(std::vector<Eigen::VectorXcd> factors) {
  if (factors.empty()) throw ValidationError("product state needs at least one subsystem");
  factors_.reserve(factors.size());
  for (auto& f : factors) {
    if (f.size() < 2) throw ValidationError("subsystem vector must have dimension >= 2");
    factors_.push_back(normalize_with_phase(std::move(f)));
  }
}

ProductPureState ProductPureState::from_bloch(std::span<const Eigen::Vector3d> bloch) {
  std::vector<Eigen::VectorXcd> f;
  for (const auto& b : bloch) {
    const double n = b.norm();
    if (std::abs(n - 1.0) > 1e-10) throw ValidationError("qubit Bloch vector must have unit length");
    const double theta = std::acos(std::clamp(b.z(), -1.0, 1.0));
    const double phi = std::atan2(b.y(), b.x());
    Eigen::VectorXcd v(2);
    v << std::cos(theta / 2), std::polar(std::sin(theta / 2), phi);
    f.push_back(std::move(v));
  }
  return ProductPureState(std::move(f));
}

Dims ProductPureState::dims() const {
  Dims d;
  for (const auto& f : factors_) d.push_back(static_cast<int>(f.size()));
  return d;
}

Eigen::VectorXcd ProductPureState::state_vector() const {
  Eigen::VectorXcd psi = factors_[0];
  for (std::size_t p = 1; p < factors_.size(); ++p) {
    const auto& f = factors_[p];
    Eigen::VectorXcd next(psi.size() * f.size());
    for (Eigen::Index a = 0; a < psi.size(); ++a) next.segment(a * f.size(), f.size()) = psi[a] * f;
    psi = std::move(next);
  }
  return psi;
}

DensityMatrix ProductPureState::projector() const {
  const Eigen::VectorXcd psi = state_vector();
  Eigen::MatrixXcd m = psi * psi.adjoint();
  m = (0.5 * (m + m.adjoint())).eval();
  return DensityMatrix(dims(), std::move(m));
}

std::vector<Eigen::VectorXd> ProductPureState::bloch_vectors() const {
  std::vector<Eigen::VectorXd> out;
  for (const auto& f : factors_) {
    const auto gens = local_generators(static_cast<int>(f.size()));
    Eigen::VectorXd b(gens.size());
    for (std::size_t a = 0; a < gens.size(); ++a) b[a] = f.dot(gens[a] * f).real();
    out.push_back(std::move(b));
  }
  return out;
}

ProductPureState product_state(std::vector<Eigen::VectorXcd> subsystem_vectors) {
  return ProductPureState(std::move(subsystem_vectors));
}

DensityMatrix ghz_theta(double theta) {
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(4);
  psi[0] = std::cos(theta);
  psi[3] = std::sin(theta);
  Eigen::MatrixXcd m = psi * psi.adjoint();
  return DensityMatrix({2, 2}, std::move(m));
}

DensityMatrix werner_mix(const DensityMatrix& rho, double V) {
  if (!(V >= 0.0 && V <= 1.0)) throw ValidationError("mixing weight V must lie in [0, 1]");
  const int d = rho.dim();
  Eigen::MatrixXcd m = V * rho.matrix();
  m.diagonal().array() += (1.0 - V) / d;
  return DensityMatrix(rho.dims(), std::move(m));
}

namespace {

Eigen::MatrixXcd ginibre(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::MatrixXcd g(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) {
      const double re = n(rng);
      const double im = n(rng);
      g(i, j) = cplx(re, im);
    }
  return g;
}

}  // namespace

DensityMatrix random_density(const Dims& dims, std::mt19937_64& rng) {
  const int d = total_dim(dims);
  const Eigen::MatrixXcd g = ginibre(d, d, rng);
  Eigen::MatrixXcd m = g * g.adjoint();
  m = (0.5 * (m + m.adjoint())).eval();
  m /= m.trace().real();
  return DensityMatrix(dims, std::move(m));
}

DensityMatrix random_density(const Dims& dims, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return random_density(dims, rng);
}

ProductPureState random_product(const Dims& dims, std::mt19937_64& rng) {
  std::vector<Eigen::VectorXcd> f;
  for (int k : dims) {
    if (k < 2) throw ValidationError("subsystem dimension must be >= 2");
    f.push_back(ginibre(k, 1, rng).col(0));
  }
  return ProductPureState(std::move(f));
}

ProductPureState random_product(const Dims& dims, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return random_product(dims, rng);
}

Eigen::MatrixXcd random_unitary(int dim, std::mt19937_64& rng) {
  const Eigen::MatrixXcd z = ginibre(dim, dim, rng);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
  Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(dim, dim);
  const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < dim; ++i) {
    const cplx rii = r(i, i);
    const double a = std::abs(rii);
    if (a > 0.0) q.col(i) *= rii / a;
  }
  return q;
}

DensityMatrix apply_local_unitaries(const DensityMatrix& rho, std::span<const Eigen::MatrixXcd> unitaries) {
  if (unitaries.size() != rho.dims().size()) throw ValidationError("need one unitary per subsystem");
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(1, 1);
  for (std::size_t p = 0; p < unitaries.size(); ++p) {
    if (unitaries[p].rows() != rho.dims()[p] || unitaries[p].cols() != rho.dims()[p])
      throw ValidationError("unitary dimension does not match subsystem");
    u = kron(u, unitaries[p]);
  }
  Eigen::MatrixXcd m = u * rho.matrix() * u.adjoint();
  m = (0.5 * (m + m.adjoint())).eval();
  m /= m.trace().real();
  return DensityMatrix(rho.dims(), std::move(m));
}

DensityMatrix mix(std::span<const double> weights, std::span<const DensityMatrix> states) {
  if (weights.size() != states.size() || states.empty()) throw ValidationError("mixture needs matching weights and states");
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(states[0].dim(), states[0].dim());
  double total = 0.0;
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (weights[i] < 0.0) throw ValidationError("mixture weights must be nonnegative");
    if (states[i].dims() != states[0].dims()) throw ValidationError("mixture components have different dims");
    m += weights[i] * states[i].matrix();
    total += weights[i];
  }
  if (std::abs(total - 1.0) > 1e-12) throw ValidationError("mixture weights must sum to 1");
  m = (0.5 * (m + m.adjoint())).eval();
  return DensityMatrix(states[0].dims(), std::move(m));
}

double DecompositionCertificate::weight_sum() const {
  double s = 0.0;
  for (const auto& t : terms) s += t.weight;
  return s;
}

double DecompositionCertificate::residual() const {
  if (!target.basis) throw ValidationError("certificate target has no basis");
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(target.size());
  for (const auto& t : terms) acc += t.weight * target.basis->product_vector(t.state.factors());
  return (acc - target.components).lpNorm<Eigen::Infinity>();
}

}  // namespace hullmeter
