#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "hullmeter/bloch_basis.hpp"

namespace hullmeter {

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kTraceTol = 1e-12;
inline constexpr double kPsdTol = 1e-10;

// Smallest eigenvalue of the Hermitian part of m.
double min_eigenvalue(const Eigen::MatrixXcd& m);
// max |m - m^dagger|
double hermiticity_error(const Eigen::MatrixXcd& m);

// Hermitian, unit-trace, positive semidefinite d x d matrix over a list of
// subsystem dimensions.
class DensityMatrix {
 public:
  // Validates every invariant; throws ValidationError with the failed check.
  DensityMatrix(Dims dims, Eigen::MatrixXcd matrix);

  const Dims& dims() const { return dims_; }
  int dim() const { return static_cast<int>(matrix_.rows()); }
  const Eigen::MatrixXcd& matrix() const { return matrix_; }

  static DensityMatrix maximally_mixed(const Dims& dims);

 private:
  Dims dims_;
  Eigen::MatrixXcd matrix_;
};

// Tensor product of per-subsystem pure states. Factors are normalised and
// phase-fixed so that the first nonzero amplitude is real and positive.
class ProductPureState {
 public:
  explicit ProductPureState(std::vector<Eigen::VectorXcd> factors);

  // Qubit factors from unit Bloch vectors (x, y, z), one per party.
  static ProductPureState from_bloch(std::span<const Eigen::Vector3d> bloch);

  const std::vector<Eigen::VectorXcd>& factors() const { return factors_; }
  int parties() const { return static_cast<int>(factors_.size()); }
  Dims dims() const;
  Eigen::VectorXcd state_vector() const;
  DensityMatrix projector() const;
  // Local generalised Bloch vectors <psi_k| Lambda_a |psi_k>, one per party,
  // in local_generators order. For qubits these are unit 3-vectors.
  std::vector<Eigen::VectorXd> bloch_vectors() const;

 private:
  std::vector<Eigen::VectorXcd> factors_;
};

ProductPureState product_state(std::vector<Eigen::VectorXcd> subsystem_vectors);

// cos(theta)|00> + sin(theta)|11>
DensityMatrix ghz_theta(double theta);

// V rho + (1 - V) I/d; V must lie in [0, 1].
DensityMatrix werner_mix(const DensityMatrix& rho, double V);

// G G^dagger / Tr(G G^dagger) with G complex Gaussian.
DensityMatrix random_density(const Dims& dims, std::uint64_t seed);
DensityMatrix random_density(const Dims& dims, std::mt19937_64& rng);
// Haar-random factor per subsystem.
ProductPureState random_product(const Dims& dims, std::uint64_t seed);
ProductPureState random_product(const Dims& dims, std::mt19937_64& rng);
// Haar unitary (QR of a complex Ginibre matrix with phase correction).
Eigen::MatrixXcd random_unitary(int dim, std::mt19937_64& rng);

// (U_1 (x) ... (x) U_n) rho (U_1 (x) ... (x) U_n)^dagger
DensityMatrix apply_local_unitaries(const DensityMatrix& rho, std::span<const Eigen::MatrixXcd> unitaries);

// sum_i p_i rho_i with p a probability vector.
DensityMatrix mix(std::span<const double> weights, std::span<const DensityMatrix> states);

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

// R = sum_i b_i r_i with b_i >= 0 and r_i product-state vectors.
struct DecompositionCertificate {
  struct Term {
    double weight;
    ProductPureState state;
  };
  std::vector<Term> terms;
  CorrelationVector target;

  double weight_sum() const;
  // max-norm of sum_i b_i r_i - R.
  double residual() const;
};

}  // namespace hullmeter
