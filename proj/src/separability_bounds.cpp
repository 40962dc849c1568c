#include "hullmeter/separability_bounds.hpp"

#include <cmath>

#include "hullmeter/error.hpp"

namespace hullmeter {

ResourceBound resource_count(const CorrelationVector& R) {
  ResourceBound b;
  if (!R.basis || !R.basis->is_tensor_product() || R.basis->dims() != Dims{2, 2}) return b;
  b.supported = true;
  b.costs.resize(R.size());
  double single = 0.0;
  double corr = 0.0;
  for (int i = 0; i < R.size(); ++i) {
    b.costs[i] = std::abs(R.components[i]);
    const auto& lbl = R.basis->label(i);
    (lbl[0] == 0 || lbl[1] == 0 ? single : corr) += b.costs[i];
  }
  b.total = single + corr;
  b.shrink_factor = 1.0 / std::max(1.0, b.total);
  b.certified_separable = b.total <= 1.0;
  b.single_body_dominated = single > corr;
  return b;
}

Eigen::MatrixXcd partial_transpose(const Eigen::MatrixXcd& m, const Dims& dims, int party) {
  if (dims.size() != 2) throw ValidationError("partial transpose needs a bipartite system");
  if (party != 0 && party != 1) throw ValidationError("party must be 0 or 1");
  const int da = dims[0];
  const int db = dims[1];
  if (m.rows() != da * db || m.cols() != da * db) throw ValidationError("matrix does not match dims");
  Eigen::MatrixXcd out(m.rows(), m.cols());
  for (int a = 0; a < da; ++a)
    for (int b = 0; b < db; ++b)
      for (int a2 = 0; a2 < da; ++a2)
        for (int b2 = 0; b2 < db; ++b2) {
          const cplx v = m(a * db + b, a2 * db + b2);
          if (party == 1)
            out(a * db + b2, a2 * db + b) = v;
          else
            out(a2 * db + b, a * db + b2) = v;
        }
  return out;
}

Eigen::MatrixXcd partial_transpose(const DensityMatrix& rho, int party) {
  return partial_transpose(rho.matrix(), rho.dims(), party);
}

namespace {

// Eigen-solver noise on exactly singular partial transposes.
constexpr double kEigTol = 1e-12;

double min_eig_mixed(const Eigen::MatrixXcd& pt, double V, int d) {
  Eigen::MatrixXcd m = V * pt;
  m.diagonal().array() += (1.0 - V) / d;
  return min_eigenvalue(m);
}

}  // namespace

PptReport ppt_boundary_V(const DensityMatrix& rho, double tol) {
  if (!(tol > 0.0)) throw ValidationError("bisection tolerance must be > 0");
  if (rho.dims().size() != 2) throw ValidationError("PPT boundary needs a bipartite system");
  const int d = rho.dim();
  PptReport rep;
  rep.transposed = partial_transpose(rho, 1);
  rep.min_eigenvalue = min_eigenvalue(rep.transposed);
  const int da = rho.dims()[0];
  const int db = rho.dims()[1];
  rep.exact = (da == 2 && db == 2) || (da == 2 && db == 3) || (da == 3 && db == 2);

  if (rep.min_eigenvalue >= -kEigTol) {
    rep.V_star = 1.0;
    rep.min_eigenvalue_at_boundary = rep.min_eigenvalue;
    rep.C_ppt = 0.0;
    return rep;
  }
  // Invariant: predicate holds at lo, fails at hi.
  double lo = 0.0;
  double hi = 1.0;
  int steps = 0;
  while (hi - lo > tol) {
    if (++steps > 200) throw ConvergenceError("PPT bisection did not converge");
    const double mid = 0.5 * (lo + hi);
    if (min_eig_mixed(rep.transposed, mid, d) >= -kEigTol)
      lo = mid;
    else
      hi = mid;
  }
  rep.bisection_steps = steps;
  rep.V_star = lo;
  rep.C_ppt = 1.0 - lo;
  rep.min_eigenvalue_at_boundary = min_eig_mixed(rep.transposed, lo, d);
  return rep;
}

}  // namespace hullmeter
