#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "hullmeter/bloch_basis.hpp"
#include "hullmeter/quantum_states.hpp"

namespace hullmeter {

// Normal direction l of a hyperplane in correlation-vector space. Its
// operator form L = sum_i l_i Theta_i satisfies l . r = <psi|L|psi> for the
// vector r of any pure state psi.
struct WitnessDirection {
  BasisPtr basis;
  Eigen::VectorXd components;

  Eigen::MatrixXcd operator_form() const;
  // (1/d)(I + L) when that matrix is positive semidefinite.
  std::optional<Eigen::MatrixXcd> density_form() const;
  double dot(const CorrelationVector& r) const;
  WitnessDirection normalized() const;
};

struct SeesawOptions {
  double tol = 1e-12;  // relative improvement per sweep
  int max_iters = 500;  // sweeps
};

struct OverlapResult {
  struct Basin {
    double value;
    ProductPureState state;
  };

  double F_value = 0.0;
  ProductPureState argmax;
  int restarts_used = 0;
  std::vector<int> iterations;  // sweeps per start
  bool converged = false;       // every start met the tolerance
  bool confident = false;       // best two starts agree within kBasinAgreement
  // Distinct local maxima, best first (only filled by maximize_overlap).
  std::vector<Basin> basins;
};

inline constexpr double kBasinAgreement = 1e-6;

// <psi| L |psi> in operator form.
double overlap(const Eigen::MatrixXcd& op, const ProductPureState& psi);
double overlap(const WitnessDirection& witness, const ProductPureState& psi);

// Alternating maximisation over one party at a time: with every other factor
// fixed the objective is a Hermitian form in the free factor, maximised by its
// top eigenvector. The objective never decreases; a decrease beyond rounding
// or a non-Hermitian contraction throws ConvergenceError.
OverlapResult seesaw_maximize(const Eigen::MatrixXcd& op, const ProductPureState& start, const SeesawOptions& options = {});
OverlapResult seesaw_maximize(const WitnessDirection& witness, const ProductPureState& start,
                              const SeesawOptions& options = {});

struct OverlapConfig {
  int restarts = 32;
  std::uint64_t seed = 1;
  bool grid_starts = true;
  SeesawOptions seesaw;
};

// Local eigenstates of the generalised Gell-Mann matrices for each party,
// combined as products: |j>, (|j> +- |k>)/sqrt2, (|j> +- i|k>)/sqrt2.
// Their correlation vectors average to zero and span the full space.
// Returns an empty list when the product would exceed max_states.
std::vector<ProductPureState> axis_grid(const Dims& dims, std::size_t max_states = 4096);

// F = max over product pure states of <psi|op|psi>, estimated by see-saw runs
// from the axis grid, any extra starts, and config.restarts seeded Haar starts.
OverlapResult maximize_overlap(const Eigen::MatrixXcd& op, const Dims& dims, const OverlapConfig& config = {},
                               std::span<const ProductPureState> extra_starts = {});
OverlapResult maximize_overlap(const WitnessDirection& witness, const OverlapConfig& config = {},
                               std::span<const ProductPureState> extra_starts = {});

}  // namespace hullmeter
