#pragma once

#include <complex>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace hullmeter {

using cplx = std::complex<double>;
using Dims = std::vector<int>;

inline constexpr int kDefaultDimCap = 64;
inline constexpr double kImagResidueTol = 1e-10;

int total_dim(const Dims& dims);

// Traceless Hermitian d x d operators for a single subsystem, normalised so
// that (1/d) Tr(A B) = delta. Ordering: symmetric off-diagonal pairs,
// antisymmetric pairs, then diagonal generators. For d = 2 this is
// (sigma_x, sigma_y, sigma_z).
std::vector<Eigen::MatrixXcd> local_generators(int d);

// Orthonormal operator basis {Theta_i} of the traceless Hermitian d x d
// matrices with (1/d) Tr(Theta_i Theta_j) = delta_ij.
//
// Bases built from subsystem dimensions are tensor products of per-party
// generators. Each operator carries a label tuple with one local index per
// party (0 = identity, k >= 1 = local_generators(d)[k - 1]); labels run in
// row-major order with the all-identity tuple dropped. For two qubits the
// label (i, j) is the 0-based version of the sigma_{i+1} (x) sigma_{j+1}
// table slot.
//
// Operators are stored as sparse triplets; tensor-product Gell-Mann
// operators have at most d nonzeros each.
class BlochBasis {
 public:
  struct Entry {
    int row;
    int col;
    cplx value;
  };

  const Dims& dims() const { return dims_; }
  int total_dim() const { return dim_; }
  int size() const { return static_cast<int>(entries_.size()); }
  bool is_tensor_product() const { return tensor_; }

  const std::vector<Entry>& entries(int i) const { return entries_.at(i); }
  const std::vector<int>& label(int i) const { return labels_.at(i); }
  // Position of a label tuple, or -1 when absent.
  int index_of(std::span<const int> label) const;

  Eigen::MatrixXcd op(int i) const;
  // sum_i coeffs[i] * Theta_i
  Eigen::MatrixXcd combine(const Eigen::VectorXd& coeffs) const;
  // Tr(m * Theta_i) for every i.
  Eigen::VectorXcd traces(const Eigen::MatrixXcd& m) const;
  // <psi| Theta_i |psi> for a pure state vector (real parts).
  Eigen::VectorXd expectations(const Eigen::VectorXcd& psi) const;
  // Correlation vector of the product state psi_1 (x) ... (x) psi_n, each
  // factor assumed normalised. Uses the factorised form when available.
  Eigen::VectorXd product_vector(std::span<const Eigen::VectorXcd> factors) const;

  // Basis Theta'_i = sum_j O(i, j) Theta_j for an orthogonal matrix O.
  std::shared_ptr<const BlochBasis> rotated(const Eigen::MatrixXd& orthogonal) const;

  static std::shared_ptr<const BlochBasis> build(const Dims& dims, int dim_cap = kDefaultDimCap);

 private:
  BlochBasis() = default;

  Dims dims_;
  int dim_ = 0;
  bool tensor_ = false;
  std::vector<std::vector<Entry>> entries_;
  std::vector<std::vector<int>> labels_;
  // Local operators for the tensor form, identity first.
  std::vector<std::vector<Eigen::MatrixXcd>> local_;
};

using BasisPtr = std::shared_ptr<const BlochBasis>;

// Real coefficient vector R of a state in a given basis.
struct CorrelationVector {
  BasisPtr basis;
  Eigen::VectorXd components;

  int size() const { return static_cast<int>(components.size()); }
  bool is_zero(double tol = 0.0) const { return components.lpNorm<Eigen::Infinity>() <= tol; }
  // Bipartite table view: entry (i, j) with 0-based local indices; (0, 0) is
  // the fixed identity coefficient 1.
  double table(int i, int j) const;
};

BasisPtr build_basis(const Dims& dims, int dim_cap = kDefaultDimCap);

class DensityMatrix;

// R_i = Tr(rho Theta_i). Throws ValidationError on dimension mismatch or when
// any imaginary residue exceeds kImagResidueTol.
CorrelationVector vectorize(const DensityMatrix& rho, const BasisPtr& basis);
CorrelationVector vectorize(const Eigen::MatrixXcd& rho, const BasisPtr& basis);

// (1/d)(I + sum_i R_i Theta_i)
Eigen::MatrixXcd devectorize(const CorrelationVector& r);
Eigen::MatrixXcd devectorize(const Eigen::VectorXd& components, const BlochBasis& basis);

// max_{i,j} |(1/d) Tr(Theta_i Theta_j) - delta_ij| and max_i |Tr Theta_i|.
double orthonormality_error(const BlochBasis& basis);
double trace_error(const BlochBasis& basis);

}  // namespace hullmeter
