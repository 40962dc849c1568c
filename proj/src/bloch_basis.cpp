#include "hullmeter/bloch_basis.hpp"

#include <cmath>
#include <string>

#include "hullmeter/error.hpp"
#include "hullmeter/quantum_states.hpp"

namespace hullmeter {

int total_dim(const Dims& dims) {
  long long d = 1;
  for (int k : dims) {
    d *= k;
    if (d > (1LL << 30)) throw ValidationError("total dimension overflow");
  }
  return static_cast<int>(d);
}

std::vector<Eigen::MatrixXcd> local_generators(int d) {
  if (d < 2) throw ValidationError("subsystem dimension must be >= 2, got " + std::to_string(d));
  // Gell-Mann matrices have Tr(l_a l_b) = 2 delta; rescale to (1/d) Tr = delta.
  const double scale = std::sqrt(d / 2.0);
  const cplx I(0.0, 1.0);
  std::vector<Eigen::MatrixXcd> out;
  out.reserve(d * d - 1);
  for (int j = 0; j < d; ++j) {
    for (int k = j + 1; k < d; ++k) {
      Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
      m(j, k) = scale;
      m(k, j) = scale;
      out.push_back(std::move(m));
    }
  }
  for (int j = 0; j < d; ++j) {
    for (int k = j + 1; k < d; ++k) {
      Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
      m(j, k) = -I * scale;
      m(k, j) = I * scale;
      out.push_back(std::move(m));
    }
  }
  for (int l = 1; l < d; ++l) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
    const double c = scale * std::sqrt(2.0 / (l * (l + 1.0)));
    for (int j = 0; j < l; ++j) m(j, j) = c;
    m(l, l) = -c * l;
    out.push_back(std::move(m));
  }
  return out;
}

namespace {

std::vector<BlochBasis::Entry> sparse_of(const Eigen::MatrixXcd& m) {
  std::vector<BlochBasis::Entry> e;
  for (int c = 0; c < m.cols(); ++c)
    for (int r = 0; r < m.rows(); ++r)
      if (m(r, c) != cplx(0.0, 0.0)) e.push_back({r, c, m(r, c)});
  return e;
}

}  // namespace

BasisPtr BlochBasis::build(const Dims& dims, int dim_cap) {
  if (dims.empty()) throw ValidationError("dims must not be empty");
  for (int k : dims)
    if (k < 2) throw ValidationError("subsystem dimension must be >= 2, got " + std::to_string(k));
  const int d = hullmeter::total_dim(dims);
  if (d > dim_cap)
    throw ValidationError("total dimension " + std::to_string(d) + " exceeds cap " + std::to_string(dim_cap));

  std::shared_ptr<BlochBasis> b(new BlochBasis());
  b->dims_ = dims;
  b->dim_ = d;
  b->tensor_ = true;

  const int parties = static_cast<int>(dims.size());
  std::vector<std::vector<std::vector<Entry>>> local_sparse(parties);
  b->local_.resize(parties);
  for (int p = 0; p < parties; ++p) {
    const int dp = dims[p];
    b->local_[p].push_back(Eigen::MatrixXcd::Identity(dp, dp));
    for (auto& g : local_generators(dp)) b->local_[p].push_back(std::move(g));
    for (const auto& m : b->local_[p]) local_sparse[p].push_back(sparse_of(m));
  }

  // Row-major over label tuples, last party fastest.
  std::vector<int> label(parties, 0);
  const int n = d * d;
  b->entries_.reserve(n - 1);
  b->labels_.reserve(n - 1);
  for (int flat = 0; flat < n; ++flat) {
    if (flat > 0) {
      std::vector<Entry> acc{{0, 0, cplx(1.0, 0.0)}};
      for (int p = 0; p < parties; ++p) {
        const int dp = dims[p];
        std::vector<Entry> next;
        next.reserve(acc.size() * local_sparse[p][label[p]].size());
        for (const auto& a : acc)
          for (const auto& e : local_sparse[p][label[p]])
            next.push_back({a.row * dp + e.row, a.col * dp + e.col, a.value * e.value});
        acc = std::move(next);
      }
      b->entries_.push_back(std::move(acc));
      b->labels_.push_back(label);
    }
    for (int p = parties - 1; p >= 0; --p) {
      if (++label[p] < dims[p] * dims[p]) break;
      label[p] = 0;
    }
  }
  return b;
}

BasisPtr build_basis(const Dims& dims, int dim_cap) { return BlochBasis::build(dims, dim_cap); }

int BlochBasis::index_of(std::span<const int> label) const {
  if (!tensor_ || label.size() != dims_.size()) return -1;
  int flat = 0;
  for (std::size_t p = 0; p < dims_.size(); ++p) {
    if (label[p] < 0 || label[p] >= dims_[p] * dims_[p]) return -1;
    flat = flat * dims_[p] * dims_[p] + label[p];
  }
  return flat - 1;
}

Eigen::MatrixXcd BlochBasis::op(int i) const {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim_, dim_);
  for (const auto& e : entries_.at(i)) m(e.row, e.col) += e.value;
  return m;
}

Eigen::MatrixXcd BlochBasis::combine(const Eigen::VectorXd& coeffs) const {
  if (coeffs.size() != size()) throw ValidationError("coefficient length does not match basis size");
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim_, dim_);
  for (int i = 0; i < size(); ++i) {
    const double c = coeffs[i];
    if (c == 0.0) continue;
    for (const auto& e : entries_[i]) m(e.row, e.col) += c * e.value;
  }
  return m;
}

Eigen::VectorXcd BlochBasis::traces(const Eigen::MatrixXcd& m) const {
  if (m.rows() != dim_ || m.cols() != dim_) throw ValidationError("matrix dimension does not match basis");
  Eigen::VectorXcd t(size());
  for (int i = 0; i < size(); ++i) {
    cplx s = 0.0;
    for (const auto& e : entries_[i]) s += m(e.col, e.row) * e.value;
    t[i] = s;
  }
  return t;
}

Eigen::VectorXd BlochBasis::expectations(const Eigen::VectorXcd& psi) const {
  if (psi.size() != dim_) throw ValidationError("state dimension does not match basis");
  Eigen::VectorXd t(size());
  for (int i = 0; i < size(); ++i) {
    cplx s = 0.0;
    for (const auto& e : entries_[i]) s += std::conj(psi[e.row]) * e.value * psi[e.col];
    t[i] = s.real();
  }
  return t;
}

Eigen::VectorXd BlochBasis::product_vector(std::span<const Eigen::VectorXcd> factors) const {
  if (factors.size() != dims_.size()) throw ValidationError("factor count does not match subsystem count");
  for (std::size_t p = 0; p < dims_.size(); ++p)
    if (factors[p].size() != dims_[p]) throw ValidationError("factor dimension does not match subsystem");
  if (!tensor_) {
    Eigen::VectorXcd psi = factors[0];
    for (std::size_t p = 1; p < factors.size(); ++p) {
      Eigen::VectorXcd next(psi.size() * factors[p].size());
      for (Eigen::Index a = 0; a < psi.size(); ++a) next.segment(a * factors[p].size(), factors[p].size()) = psi[a] * factors[p];
      psi = std::move(next);
    }
    return expectations(psi);
  }
  // Augmented local vectors (1, a_k), Kronecker product, drop the leading 1.
  Eigen::VectorXd acc = Eigen::VectorXd::Ones(1);
  for (std::size_t p = 0; p < dims_.size(); ++p) {
    const auto& ops = local_[p];
    Eigen::VectorXd loc(ops.size());
    for (std::size_t a = 0; a < ops.size(); ++a) loc[a] = factors[p].dot(ops[a] * factors[p]).real();
    Eigen::VectorXd next(acc.size() * loc.size());
    for (Eigen::Index i = 0; i < acc.size(); ++i) next.segment(i * loc.size(), loc.size()) = acc[i] * loc;
    acc = std::move(next);
  }
  return acc.tail(acc.size() - 1);
}

BasisPtr BlochBasis::rotated(const Eigen::MatrixXd& orthogonal) const {
  const int n = size();
  if (orthogonal.rows() != n || orthogonal.cols() != n) throw ValidationError("rotation size does not match basis");
  const double err = (orthogonal * orthogonal.transpose() - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
  if (err > 1e-12) throw ValidationError("rotation matrix is not orthogonal");
  std::shared_ptr<BlochBasis> b(new BlochBasis());
  b->dims_ = dims_;
  b->dim_ = dim_;
  b->tensor_ = false;
  for (int i = 0; i < n; ++i) {
    b->entries_.push_back(sparse_of(combine(orthogonal.row(i).transpose())));
    b->labels_.push_back({i});
  }
  return b;
}

double CorrelationVector::table(int i, int j) const {
  if (!basis || basis->dims().size() != 2) throw ValidationError("table view requires a bipartite basis");
  if (i == 0 && j == 0) return 1.0;
  const int lbl[2] = {i, j};
  const int idx = basis->index_of(lbl);
  if (idx < 0) throw ValidationError("table index out of range");
  return components[idx];
}

CorrelationVector vectorize(const Eigen::MatrixXcd& rho, const BasisPtr& basis) {
  const Eigen::VectorXcd t = basis->traces(rho);
  const double residue = t.imag().lpNorm<Eigen::Infinity>();
  if (residue > kImagResidueTol)
    throw ValidationError("imaginary residue " + std::to_string(residue) + " in vectorize (non-Hermitian input?)");
  return {basis, t.real()};
}

CorrelationVector vectorize(const DensityMatrix& rho, const BasisPtr& basis) {
  if (rho.dims() != basis->dims()) throw ValidationError("density matrix dims do not match basis dims");
  return vectorize(rho.matrix(), basis);
}

Eigen::MatrixXcd devectorize(const Eigen::VectorXd& components, const BlochBasis& basis) {
  if (components.size() != basis.size()) throw ValidationError("correlation vector length does not match basis");
  const int d = basis.total_dim();
  Eigen::MatrixXcd m = basis.combine(components);
  m.diagonal().array() += 1.0;
  m /= static_cast<double>(d);
  // Hermitian by construction up to rounding; make it exact.
  m = (0.5 * (m + m.adjoint())).eval();
  return m;
}

Eigen::MatrixXcd devectorize(const CorrelationVector& r) {
  if (!r.basis) throw ValidationError("correlation vector has no basis");
  return devectorize(r.components, *r.basis);
}

double orthonormality_error(const BlochBasis& basis) {
  const int n = basis.size();
  const int d = basis.total_dim();
  std::vector<Eigen::MatrixXcd> ops;
  ops.reserve(n);
  for (int i = 0; i < n; ++i) ops.push_back(basis.op(i));
  double err = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const cplx g = (ops[i] * ops[j]).trace() / static_cast<double>(d);
      err = std::max(err, std::abs(g - (i == j ? 1.0 : 0.0)));
    }
  return err;
}

double trace_error(const BlochBasis& basis) {
  double err = 0.0;
  for (int i = 0; i < basis.size(); ++i) {
    cplx t = 0.0;
    for (const auto& e : basis.entries(i))
      if (e.row == e.col) t += e.value;
    err = std::max(err, std::abs(t));
  }
  return err;
}

}  // namespace hullmeter
