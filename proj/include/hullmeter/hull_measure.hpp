#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hullmeter/bloch_basis.hpp"
#include "hullmeter/product_overlap.hpp"
#include "hullmeter/quantum_states.hpp"

namespace hullmeter {

inline constexpr double kZeroDenominator = 1e-12;

struct SolverConfig {
  int direction_samples = 4096;
  int refine_steps = 200;
  int F_restarts = 32;
  std::uint64_t seed = 1;
  double tol_ratio = 1e-6;
  // Empty means "take the dims of the input state".
  Dims dims;
  // Column-generation rounds in the polish phase.
  int cut_rounds = 600;
  // Restart multiplier used when a direction would lower alpha but the F
  // restarts disagree.
  int escalation_factor = 4;
  SeesawOptions seesaw;
  // Divide C by this constant when set (must be > 0).
  std::optional<double> normalization;

  void validate() const;
};

enum class Rejection {
  None,
  ZeroDenominator,         // |l.R| <= kZeroDenominator
  Indeterminate,           // l.R = 0 and F = 0
  NonPositiveDenominator,  // l.R < 0
  NonPositiveRatio,        // beta <= 0
  RatioAtLeastOne,         // beta >= 1
};

const char* to_string(Rejection r);

struct BetaOutcome {
  double ratio = 0.0;  // F / (l.R) when the denominator is usable
  Rejection reason = Rejection::None;
  bool accepted() const { return reason == Rejection::None; }
};

// beta = F_l / (l.R), accepted only when it lies strictly inside (0, 1).
BetaOutcome beta(const WitnessDirection& l, const CorrelationVector& R, double F_l);

struct MeasureDiagnostics {
  int accepted = 0;
  int rejected = 0;
  // Directions whose lower bound on beta already met the running alpha.
  int dominated = 0;
  std::vector<double> accepted_betas;

  bool zero_vector = false;
  // Largest t with t R inside the hull of the product vectors found; a
  // certified lower bound on alpha.
  double hull_lower_bound = 0.0;
  int hull_points = 0;
  int cut_rounds_used = 0;
  bool polish_converged = false;

  bool F_low_confidence = false;
  // (Tr(rho0 rho) - F(rho0)) / (Tr(rho0 rho) - 1/d) with the best witness
  // written as a density matrix rho0 = (I + s L)/d.
  double C_density_form = 0.0;
  // alpha restricted to witnesses with positive density form.
  double alpha_density_form = 1.0;
  double density_scale = 1.0;

  double seconds_sampling = 0.0;
  double seconds_refine = 0.0;
  double seconds_polish = 0.0;
};

struct MeasureResult {
  double alpha = 1.0;
  double C = 0.0;
  std::optional<double> C_normalized;
  WitnessDirection best_witness;
  double best_F = 0.0;
  double best_beta = 1.0;
  std::optional<ProductPureState> best_argmax;
  int accepted_directions = 0;
  int rejected_directions = 0;
  MeasureDiagnostics diagnostics;
  // R = sum_i b_i r_i from the polish phase; sum b_i = 1 / hull_lower_bound.
  std::optional<DecompositionCertificate> certificate;
};

// alpha = min over witness directions l of F(l) / (l.R), C = 1 - alpha.
// Phases: seeded sampling of directions (plus structured seeds), column
// generation over product vectors that closes the gap between the best beta
// and a certified lower bound, then coordinate refinement of the best
// direction.
MeasureResult estimate_alpha(const DensityMatrix& rho, const SolverConfig& config = {});
MeasureResult estimate_alpha(const DensityMatrix& rho, const BasisPtr& basis, const SolverConfig& config = {});

// estimate_alpha plus the optional normalisation of C.
MeasureResult measure(const DensityMatrix& rho, const SolverConfig& config = {});

// Measures every state; results are in input order regardless of thread
// count. threads <= 0 uses thread_budget().
std::vector<MeasureResult> measure_batch(std::span<const DensityMatrix> states, const SolverConfig& config,
                                         int threads = 0);

// HULLMETER_THREADS if set, else hardware concurrency, at least 1.
int thread_budget();

// 1 / sum b_i, or 1 when sum b_i <= 1. Throws ValidationError when the
// certificate has negative weights or does not reconstruct its target.
double alpha_from_certificate(const DecompositionCertificate& cert, double tol = 1e-10);

// Every term lies on the tangent plane l.r = F_l (to 1e-8) and F_l is the
// product-state maximum of l (to 1e-6).
bool verify_certificate(const DecompositionCertificate& cert, const WitnessDirection& l, double F_l,
                        const OverlapConfig& config = {});

}  // namespace hullmeter
