#include "hullmeter/hull_measure.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <functional>
#include <random>
#include <thread>

#include "hullmeter/error.hpp"
#include "simplex.hpp"

namespace hullmeter {

void SolverConfig::validate() const {
  if (direction_samples < 0) throw ValidationError("direction_samples must be >= 0");
  if (refine_steps < 0) throw ValidationError("refine_steps must be >= 0");
  if (F_restarts < 1) throw ValidationError("F_restarts must be >= 1");
  if (cut_rounds < 0) throw ValidationError("cut_rounds must be >= 0");
  if (escalation_factor < 1) throw ValidationError("escalation_factor must be >= 1");
  if (!(tol_ratio > 0.0)) throw ValidationError("tol_ratio must be > 0");
  if (!(seesaw.tol > 0.0) || seesaw.max_iters < 1) throw ValidationError("see-saw tolerance and iteration cap must be positive");
  if (normalization && !(*normalization > 0.0)) throw ValidationError("normalization constant must be > 0");
}

const char* to_string(Rejection r) {
  switch (r) {
    case Rejection::None: return "accepted";
    case Rejection::ZeroDenominator: return "zero-denominator";
    case Rejection::Indeterminate: return "indeterminate";
    case Rejection::NonPositiveDenominator: return "non-positive-denominator";
    case Rejection::NonPositiveRatio: return "non-positive-ratio";
    case Rejection::RatioAtLeastOne: return "ratio-at-least-one";
  }
  return "unknown";
}

namespace {

BetaOutcome beta_from(double denom, double F) {
  if (std::abs(denom) <= kZeroDenominator)
    return {0.0, F == 0.0 ? Rejection::Indeterminate : Rejection::ZeroDenominator};
  if (denom < 0.0) return {F / denom, Rejection::NonPositiveDenominator};
  const double ratio = F / denom;
  if (ratio <= 0.0) return {ratio, Rejection::NonPositiveRatio};
  if (ratio >= 1.0) return {ratio, Rejection::RatioAtLeastOne};
  return {ratio, Rejection::None};
}

}  // namespace

BetaOutcome beta(const WitnessDirection& l, const CorrelationVector& R, double F_l) {
  return beta_from(l.dot(R), F_l);
}

namespace {

using Clock = std::chrono::steady_clock;

constexpr int kColumnsPerRound = 3;
constexpr std::size_t kQuickStarts = 4;
constexpr int kQuickSweeps = 20;
constexpr double kColumnSlack = 1e-12;
// Below this the change in beta is at the see-saw's resolution.
constexpr double kMinRefineStep = 1e-5;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// Signed permutation matrices with determinant +1.
std::vector<Eigen::Matrix3d> proper_signed_permutations() {
  std::vector<Eigen::Matrix3d> out;
  int perm[3] = {0, 1, 2};
  do {
    for (int s = 0; s < 8; ++s) {
      Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
      for (int i = 0; i < 3; ++i) m(i, perm[i]) = (s >> i) & 1 ? -1.0 : 1.0;
      if (m.determinant() > 0.0) out.push_back(m);
    }
  } while (std::next_permutation(perm, perm + 3));
  return out;
}

// Structured witness seeds, as operators. The first is the direction of R
// itself; bipartite inputs add directions aligned with the singular vectors
// of the correlation block, and two qubits add the sigma_x sigma_x -
// sigma_y sigma_y + sigma_z sigma_z witness under local axis rotations.
std::vector<Eigen::MatrixXcd> structured_seeds(const DensityMatrix& rho) {
  const auto canonical = build_basis(rho.dims(), std::max(kDefaultDimCap, rho.dim()));
  const CorrelationVector R = vectorize(rho, canonical);
  std::vector<Eigen::MatrixXcd> seeds;
  seeds.push_back(canonical->combine(R.components));
  if (rho.dims().size() != 2) return seeds;

  const int na = rho.dims()[0] * rho.dims()[0] - 1;
  const int nb = rho.dims()[1] * rho.dims()[1] - 1;
  auto block_seed = [&](const Eigen::MatrixXd& block) {
    Eigen::VectorXd l = Eigen::VectorXd::Zero(canonical->size());
    for (int i = 0; i < na; ++i)
      for (int j = 0; j < nb; ++j) {
        const int lbl[2] = {i + 1, j + 1};
        l[canonical->index_of(lbl)] = block(i, j);
      }
    return canonical->combine(l);
  };

  Eigen::MatrixXd T(na, nb);
  for (int i = 0; i < na; ++i)
    for (int j = 0; j < nb; ++j) T(i, j) = R.table(i + 1, j + 1);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(T, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const int k = std::min<int>(3, static_cast<int>(svd.singularValues().size()));
  if (svd.singularValues()[0] > 1e-12) {
    for (int s = 0; s < (1 << k); ++s) {
      Eigen::MatrixXd block = Eigen::MatrixXd::Zero(na, nb);
      for (int m = 0; m < k; ++m)
        block += ((s >> m) & 1 ? -1.0 : 1.0) * svd.matrixU().col(m) * svd.matrixV().col(m).transpose();
      seeds.push_back(block_seed(block));
    }
  }

  if (rho.dims() == Dims{2, 2}) {
    const auto rots = proper_signed_permutations();
    const Eigen::Matrix3d base = Eigen::Vector3d(1.0, -1.0, 1.0).asDiagonal();
    std::vector<Eigen::Matrix3d> seen;
    for (const auto& oa : rots)
      for (const auto& ob : rots) {
        const Eigen::Matrix3d block = oa * base * ob.transpose();
        const bool dup = std::any_of(seen.begin(), seen.end(), [&](const auto& b) { return (b - block).cwiseAbs().maxCoeff() < 1e-12; });
        if (dup) continue;
        seen.push_back(block);
        seeds.push_back(block_seed(block));
      }
  }
  return seeds;
}

struct Evaluation {
  Rejection reason = Rejection::None;
  bool dominated = false;
  bool full = false;
  bool confident = true;
  double denom = 0.0;
  double F = 0.0;
  double ratio = 0.0;
  std::vector<OverlapResult::Basin> basins;
};

class Search {
 public:
  Search(const DensityMatrix& rho, const BasisPtr& basis, const CorrelationVector& R, const SolverConfig& config)
      : rho_(rho), basis_(basis), R_(R), config_(config), dims_(rho.dims()) {
    ocfg_.restarts = config.F_restarts;
    ocfg_.seed = config.seed ^ 0x6a09e667f3bcc909ULL;
    ocfg_.seesaw = config.seesaw;
    for (auto& s : axis_grid(dims_)) add_to_pool(std::move(s));
    if (pool_.empty()) {
      std::mt19937_64 rng(config.seed ^ 0xbb67ae8584caa73bULL);
      for (int i = 0; i < 4 * basis->size(); ++i) add_to_pool(random_product(dims_, rng));
    }
  }

  Evaluation evaluate(const Eigen::VectorXd& l, bool prune, std::size_t quick_starts = 1) {
    Evaluation e;
    e.denom = l.dot(R_.components);
    if (e.denom <= kZeroDenominator) {
      e.reason = beta_from(e.denom, l.isZero(0.0) ? 0.0 : 1.0).reason;
      return e;
    }
    const Eigen::MatrixXcd L = basis_->combine(l);

    // See-saw runs from the best known product states give a lower bound on
    // F, hence on beta; that is enough to reject or skip most directions.
    for (std::size_t k : best_pool_points(l, quick_starts)) {
      OverlapResult quick = seesaw_maximize(L, pool_[k], quick_options());
      if (e.basins.empty() || quick.F_value > e.F) {
        e.F = quick.F_value;
        e.basins.assign(1, {quick.F_value, std::move(quick.argmax)});
      }
    }
    const double lower = e.F / e.denom;
    if (lower >= 1.0) {
      e.reason = Rejection::RatioAtLeastOne;
      e.ratio = lower;
      return e;
    }
    if (prune && lower >= alpha_) {
      e.dominated = true;
      e.ratio = lower;
      return e;
    }

    full_maximize(L, e, ocfg_);
    BetaOutcome b = beta_from(e.denom, e.F);
    if (b.accepted() && b.ratio < alpha_ && !e.confident && config_.escalation_factor > 1) {
      OverlapConfig wide = ocfg_;
      wide.restarts = ocfg_.restarts * config_.escalation_factor;
      wide.seed = ocfg_.seed + 0x9e3779b97f4a7c15ULL;
      full_maximize(L, e, wide);
      b = beta_from(e.denom, e.F);
    }
    e.reason = b.reason;
    e.ratio = b.ratio;
    return e;
  }

  // Applies an evaluation to the running minimum. Returns true when alpha fell.
  bool consider(const Eigen::VectorXd& l, const Evaluation& e) {
    if (e.dominated) {
      ++diag_.dominated;
      return false;
    }
    if (e.reason != Rejection::None) {
      ++diag_.rejected;
      return false;
    }
    ++diag_.accepted;
    diag_.accepted_betas.push_back(e.ratio);
    if (!(e.ratio < alpha_)) return false;
    alpha_ = e.ratio;
    best_l_ = l;
    best_F_ = e.basins.front().value;
    best_argmax_ = e.basins.front().state;
    best_confident_ = e.confident;
    return true;
  }

  void absorb(const Evaluation& e, std::size_t max_states) {
    std::size_t added = 0;
    for (const auto& b : e.basins) {
      if (added >= max_states) break;
      if (add_to_pool(b.state)) ++added;
    }
  }

  // Adds up to max_new product vectors with l . r > level. Cheap see-saw runs
  // from the best pool points come first; the full maximization (which also
  // updates the running minimum) runs only when they find nothing.
  int extend(const Eigen::VectorXd& l, double level, int max_new) {
    const Eigen::MatrixXcd L = basis_->combine(l);
    std::vector<ProductPureState> found;
    double best_quick = -std::numeric_limits<double>::infinity();
    for (std::size_t k : best_pool_points(l, kQuickStarts)) {
      OverlapResult r = seesaw_maximize(L, pool_[k], quick_options());
      best_quick = std::max(best_quick, r.F_value);
      if (r.F_value > level + kColumnSlack) found.push_back(std::move(r.argmax));
    }
    int added = 0;
    for (auto& st : found) {
      if (added >= max_new) break;
      if (add_to_pool(std::move(st))) ++added;
    }
    // Far from the hull boundary the cheap columns suffice; close to it the
    // full maximization is needed so the running minimum can meet the bound.
    if (added > 0 && best_quick - level > config_.tol_ratio * l.dot(R_.components)) return added;

    const Evaluation e = evaluate(l, false);
    consider(l, e);
    for (const auto& b : e.basins) {
      if (added >= max_new || !(b.value > level + kColumnSlack)) break;
      if (add_to_pool(b.state)) ++added;
    }
    return added;
  }

  double alpha() const { return alpha_; }
  bool has_best() const { return best_l_.size() > 0; }
  const Eigen::VectorXd& best_l() const { return best_l_; }
  double best_F() const { return best_F_; }
  const std::optional<ProductPureState>& best_argmax() const { return best_argmax_; }
  bool best_confident() const { return best_confident_; }
  MeasureDiagnostics& diag() { return diag_; }
  const std::vector<ProductPureState>& pool() const { return pool_; }
  const std::vector<Eigen::VectorXd>& pool_vectors() const { return pool_vectors_; }

  bool add_to_pool(ProductPureState s) {
    Eigen::VectorXd r = basis_->product_vector(s.factors());
    for (const auto& v : pool_vectors_)
      if ((v - r).lpNorm<Eigen::Infinity>() < 1e-10) return false;
    pool_.push_back(std::move(s));
    pool_vectors_.push_back(std::move(r));
    return true;
  }

 private:
  // Every see-saw iterate is a product state, so a truncated run still gives
  // a valid lower bound on F.
  SeesawOptions quick_options() const {
    SeesawOptions o = config_.seesaw;
    o.max_iters = std::min(o.max_iters, kQuickSweeps);
    return o;
  }

  std::vector<std::size_t> best_pool_points(const Eigen::VectorXd& l, std::size_t count) const {
    std::vector<std::pair<double, std::size_t>> scored;
    scored.reserve(pool_vectors_.size());
    for (std::size_t k = 0; k < pool_vectors_.size(); ++k) scored.emplace_back(l.dot(pool_vectors_[k]), k);
    count = std::min(count, scored.size());
    std::partial_sort(scored.begin(), scored.begin() + count, scored.end(), std::greater<>());
    std::vector<std::size_t> out(count);
    for (std::size_t i = 0; i < count; ++i) out[i] = scored[i].second;
    return out;
  }

  void full_maximize(const Eigen::MatrixXcd& L, Evaluation& e, const OverlapConfig& cfg) {
    const std::vector<ProductPureState> extra{e.basins.front().state};
    OverlapResult r = maximize_overlap(L, dims_, cfg, extra);
    e.full = true;
    if (r.F_value >= e.F) {
      e.F = r.F_value;
      e.confident = r.confident;
      e.basins = std::move(r.basins);
    }
  }

  const DensityMatrix& rho_;
  BasisPtr basis_;
  const CorrelationVector& R_;
  const SolverConfig& config_;
  Dims dims_;
  OverlapConfig ocfg_;

  double alpha_ = 1.0;
  Eigen::VectorXd best_l_;
  double best_F_ = 0.0;
  std::optional<ProductPureState> best_argmax_;
  bool best_confident_ = true;
  MeasureDiagnostics diag_;
  std::vector<ProductPureState> pool_;
  std::vector<Eigen::VectorXd> pool_vectors_;
};

Eigen::VectorXd components_in(const Eigen::MatrixXcd& op, const BlochBasis& basis) {
  return basis.traces(op).real() / static_cast<double>(basis.total_dim());
}

}  // namespace

MeasureResult estimate_alpha(const DensityMatrix& rho, const BasisPtr& basis, const SolverConfig& config) {
  config.validate();
  if (!config.dims.empty() && config.dims != rho.dims()) throw ValidationError("config dims do not match state dims");
  if (!basis || basis->dims() != rho.dims()) throw ValidationError("basis dims do not match state dims");

  const CorrelationVector R = vectorize(rho, basis);
  const int n = basis->size();
  MeasureResult result;
  result.best_witness = {basis, Eigen::VectorXd::Zero(n)};

  if (R.is_zero(kZeroDenominator)) {
    // Maximally mixed: the zero vector is inside the hull.
    result.diagnostics.zero_vector = true;
    result.diagnostics.hull_lower_bound = 1.0;
    result.diagnostics.polish_converged = true;
    return result;
  }

  Search search(rho, basis, R, config);

  // Phase 1: structured seeds, then seeded random unit directions.
  auto t0 = Clock::now();
  for (const auto& op : structured_seeds(rho)) {
    Eigen::VectorXd l = components_in(op, *basis);
    if (l.norm() == 0.0) continue;
    l.normalize();
    const Evaluation e = search.evaluate(l, true);
    search.consider(l, e);
    if (e.full) search.absorb(e, 2);
  }
  {
    std::mt19937_64 rng(config.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int s = 0; s < config.direction_samples; ++s) {
      Eigen::VectorXd l(n);
      for (int i = 0; i < n; ++i) l[i] = normal(rng);
      l.normalize();
      const Evaluation e = search.evaluate(l, true);
      search.consider(l, e);
      if (e.full) search.absorb(e, 2);
    }
  }
  search.diag().seconds_sampling = seconds_since(t0);

  // Phase 2: column generation. The LP over the product vectors collected so
  // far gives the largest certified shrink factor t and a dual direction l;
  // the see-saw either finds a product vector beyond the dual hyperplane or
  // shows that F(l) = t, at which point the running minimum of beta meets t.
  t0 = Clock::now();
  detail::HullLp lp(R.components);
  std::vector<std::size_t> lp_members;
  for (std::size_t k = 0; k < search.pool_vectors().size(); ++k) {
    lp.add_point(search.pool_vectors()[k]);
    lp_members.push_back(k);
  }
  auto sync_lp = [&]() {
    for (std::size_t k = lp_members.size(); k < search.pool_vectors().size(); ++k) {
      lp.add_point(search.pool_vectors()[k]);
      lp_members.push_back(k);
    }
  };
  double lower = 0.0;
  bool lp_ok = false;
  auto& diag = search.diag();
  int round = 0;
  for (; round < config.cut_rounds; ++round) {
    lp_ok = lp.solve();
    if (!lp_ok) break;
    lower = lp.shrink();
    if (lower >= 1.0 - 1e-12 || search.alpha() - lower <= config.tol_ratio) {
      diag.polish_converged = true;
      break;
    }
    const Eigen::VectorXd l = lp.direction();
    const double level = lower * (l.dot(R.components));
    if (search.extend(l, level, kColumnsPerRound) == 0) {
      // No product vector beyond the dual hyperplane: the LP bound is tight
      // up to the accuracy of F.
      diag.polish_converged = true;
      ++round;
      break;
    }
    sync_lp();
  }
  if (lp_ok && round == config.cut_rounds) {
    lp_ok = lp.solve();
    if (lp_ok) lower = lp.shrink();
  }
  diag.cut_rounds_used = round;
  diag.hull_points = lp.points();
  diag.hull_lower_bound = std::min(1.0, std::max(0.0, lower));
  if (lp_ok && lower > 0.0) {
    DecompositionCertificate cert{.terms = {}, .target = R};
    const auto w = lp.weights();
    for (std::size_t k = 0; k < w.size(); ++k)
      if (w[k] > 1e-14) cert.terms.push_back({w[k] / lower, search.pool()[lp_members[k]]});
    result.certificate = std::move(cert);
  }
  diag.seconds_polish = seconds_since(t0);

  // Phase 3: coordinate perturbation of the best direction with a shrinking step.
  t0 = Clock::now();
  if (search.has_best()) {
    Eigen::VectorXd l = search.best_l();
    double step = 0.25;
    int failed = 0;
    for (int s = 0; s < config.refine_steps && step >= kMinRefineStep; ++s) {
      const int i = s % n;
      bool improved = false;
      for (double sign : {1.0, -1.0}) {
        Eigen::VectorXd cand = l;
        cand[i] += sign * step;
        if (cand.norm() == 0.0) continue;
        cand.normalize();
        const Evaluation e = search.evaluate(cand, true, kQuickStarts);
        if (search.consider(cand, e)) {
          l = cand;
          improved = true;
          break;
        }
      }
      failed = improved ? 0 : failed + 1;
      if (failed >= n) {
        step *= 0.5;
        failed = 0;
      }
    }
  }
  search.diag().seconds_refine = seconds_since(t0);

  result.alpha = search.alpha();
  result.C = 1.0 - result.alpha;
  result.accepted_directions = diag.accepted;
  result.rejected_directions = diag.rejected;
  if (search.has_best()) {
    result.best_witness = {basis, search.best_l()};
    result.best_F = search.best_F();
    result.best_beta = result.alpha;
    result.best_argmax = search.best_argmax();
    diag.F_low_confidence = !search.best_confident();

    // Same ratio in density-matrix form; the witness is scaled until
    // (I + s L)/d is positive semidefinite, which leaves beta unchanged.
    const int d = basis->total_dim();
    const Eigen::MatrixXcd L = result.best_witness.operator_form();
    const double lmin = min_eigenvalue(L);
    const double s = lmin < -1.0 ? 1.0 / -lmin : 1.0;
    Eigen::MatrixXcd rho0 = s * L;
    rho0.diagonal().array() += 1.0;
    rho0 /= static_cast<double>(d);
    const double tr = (rho0 * rho.matrix()).trace().real();
    const double f = overlap(rho0, *result.best_argmax);
    diag.density_scale = s;
    diag.C_density_form = (tr - f) / (tr - 1.0 / d);
    diag.alpha_density_form = 1.0 - diag.C_density_form;
  } else {
    Eigen::VectorXd l = R.components.normalized();
    result.best_witness = {basis, l};
    OverlapConfig ocfg;
    ocfg.restarts = config.F_restarts;
    ocfg.seed = config.seed;
    ocfg.seesaw = config.seesaw;
    const OverlapResult r = maximize_overlap(result.best_witness, ocfg);
    result.best_F = r.F_value;
    result.best_argmax = r.argmax;
    result.best_beta = 1.0;
    diag.C_density_form = 0.0;
    diag.alpha_density_form = 1.0;
  }
  diag.accepted_betas.shrink_to_fit();
  result.diagnostics = std::move(diag);
  return result;
}

MeasureResult estimate_alpha(const DensityMatrix& rho, const SolverConfig& config) {
  return estimate_alpha(rho, build_basis(rho.dims()), config);
}

MeasureResult measure(const DensityMatrix& rho, const SolverConfig& config) {
  MeasureResult r = estimate_alpha(rho, config);
  if (config.normalization) r.C_normalized = r.C / *config.normalization;
  return r;
}

int thread_budget() {
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw < 1) hw = 1;
  if (const char* env = std::getenv("HULLMETER_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  return hw;
}

std::vector<MeasureResult> measure_batch(std::span<const DensityMatrix> states, const SolverConfig& config,
                                         int threads) {
  config.validate();
  if (threads <= 0) threads = thread_budget();
  threads = std::max(1, std::min<int>(threads, static_cast<int>(states.size())));
  std::vector<std::optional<MeasureResult>> slots(states.size());
  std::vector<std::exception_ptr> errors(states.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i; (i = next.fetch_add(1)) < states.size();) {
      try {
        slots[i] = measure(states[i], config);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  std::vector<MeasureResult> out;
  out.reserve(states.size());
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
    out.push_back(std::move(*slots[i]));
  }
  return out;
}

double alpha_from_certificate(const DecompositionCertificate& cert, double tol) {
  for (const auto& t : cert.terms)
    if (t.weight < 0.0) throw ValidationError("certificate has a negative weight");
  const double res = cert.residual();
  if (res > tol) throw ValidationError("certificate does not reconstruct its target (residual " + std::to_string(res) + ")");
  const double sum = cert.weight_sum();
  return sum <= 1.0 ? 1.0 : 1.0 / sum;
}

bool verify_certificate(const DecompositionCertificate& cert, const WitnessDirection& l, double F_l,
                        const OverlapConfig& config) {
  if (!cert.target.basis || !l.basis || cert.target.basis->dims() != l.basis->dims()) return false;
  if (l.components.size() != cert.target.size()) return false;
  for (const auto& t : cert.terms) {
    const Eigen::VectorXd r = l.basis->product_vector(t.state.factors());
    if (std::abs(l.components.dot(r) - F_l) > 1e-8) return false;
  }
  const OverlapResult best = maximize_overlap(l, config);
  return std::abs(best.F_value - F_l) <= 1e-6;
}

}  // namespace hullmeter
