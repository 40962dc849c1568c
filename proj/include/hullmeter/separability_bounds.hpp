#pragma once

#include <vector>

#include <Eigen/Dense>

#include "hullmeter/bloch_basis.hpp"
#include "hullmeter/quantum_states.hpp"

namespace hullmeter {

// Sufficient separability condition for two qubits. Every component of
// magnitude c is the sum of two product vectors of weight c/2 whose other
// entries cancel, so N(R_ij) = |R_ij| and R / max(1, N_R) is a convex
// combination of product vectors.
struct ResourceBound {
  bool supported = false;
  std::vector<double> costs;  // per component, basis order
  double total = 0.0;         // N_R
  double shrink_factor = 1.0;  // 1 / max(1, N_R)
  bool certified_separable = false;
  // Single-body (local Bloch) components carry more cost than correlations.
  bool single_body_dominated = false;
};

// Unsupported (non two-qubit) bases return supported = false.
ResourceBound resource_count(const CorrelationVector& R);

// Transpose on the indices of one party of a bipartite state.
Eigen::MatrixXcd partial_transpose(const Eigen::MatrixXcd& m, const Dims& dims, int party = 1);
Eigen::MatrixXcd partial_transpose(const DensityMatrix& rho, int party = 1);

struct PptReport {
  Eigen::MatrixXcd transposed;
  double min_eigenvalue = 0.0;  // of the partial transpose of rho
  double V_star = 1.0;          // largest V with werner_mix(rho, V) PPT
  double C_ppt = 0.0;           // 1 - V_star
  double min_eigenvalue_at_boundary = 0.0;
  int bisection_steps = 0;
  // PPT is equivalent to separability for 2x2 and 2x3; elsewhere V_star is
  // only an upper bound on alpha.
  bool exact = false;
};

// Bisection on V in [0, 1] over the monotone predicate
// "min eig of partial_transpose(werner_mix(rho, V)) >= -1e-12".
// Throws ConvergenceError if 200 halvings do not reach tol.
PptReport ppt_boundary_V(const DensityMatrix& rho, double tol = 1e-10);

}  // namespace hullmeter
