#include "hullmeter/product_overlap.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "hullmeter/error.hpp"

namespace hullmeter {

Eigen::MatrixXcd WitnessDirection::operator_form() const {
  if (!basis) throw ValidationError("witness has no basis");
  return basis->combine(components);
}

std::optional<Eigen::MatrixXcd> WitnessDirection::density_form() const {
  Eigen::MatrixXcd m = operator_form();
  m.diagonal().array() += 1.0;
  m /= static_cast<double>(basis->total_dim());
  if (min_eigenvalue(m) < -kPsdTol) return std::nullopt;
  return m;
}

double WitnessDirection::dot(const CorrelationVector& r) const {
  if (r.size() != components.size()) throw ValidationError("witness and correlation vector lengths differ");
  return components.dot(r.components);
}

WitnessDirection WitnessDirection::normalized() const {
  const double n = components.norm();
  if (!(n > 0.0)) throw ValidationError("cannot normalise a zero witness");
  return {basis, components / n};
}

double overlap(const Eigen::MatrixXcd& op, const ProductPureState& psi) {
  const Eigen::VectorXcd v = psi.state_vector();
  if (v.size() != op.rows()) throw ValidationError("state dimension does not match witness operator");
  return v.dot(op * v).real();
}

double overlap(const WitnessDirection& witness, const ProductPureState& psi) {
  if (psi.dims() != witness.basis->dims()) throw ValidationError("state dims do not match witness basis");
  return overlap(witness.operator_form(), psi);
}

namespace {

Eigen::VectorXcd kron_vec(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  Eigen::VectorXcd out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a[i] * b;
  return out;
}

// Hermitian form of op in the free factor k with all other factors fixed.
Eigen::MatrixXcd contract(const Eigen::MatrixXcd& op, const std::vector<Eigen::VectorXcd>& f, std::size_t k) {
  Eigen::VectorXcd left = Eigen::VectorXcd::Ones(1);
  for (std::size_t p = 0; p < k; ++p) left = kron_vec(left, f[p]);
  Eigen::VectorXcd right = Eigen::VectorXcd::Ones(1);
  for (std::size_t p = k + 1; p < f.size(); ++p) right = kron_vec(right, f[p]);
  const Eigen::Index dk = f[k].size();
  const Eigen::Index dr = right.size();
  Eigen::MatrixXcd embed = Eigen::MatrixXcd::Zero(op.rows(), dk);
  for (Eigen::Index i = 0; i < left.size(); ++i)
    for (Eigen::Index a = 0; a < dk; ++a) embed.col(a).segment((i * dk + a) * dr, dr) = left[i] * right;
  return embed.adjoint() * op * embed;
}

struct TopEigen {
  double value;
  Eigen::VectorXcd vector;
};

TopEigen top_eigen(const Eigen::MatrixXcd& m) {
  if (m.rows() == 2) {
    const double a = m(0, 0).real();
    const double c = m(1, 1).real();
    const cplx b = 0.5 * (m(0, 1) + std::conj(m(1, 0)));
    const double half = 0.5 * (a - c);
    const double lam = 0.5 * (a + c) + std::sqrt(half * half + std::norm(b));
    Eigen::VectorXcd v(2);
    if (a >= c)
      v << lam - c, std::conj(b);
    else
      v << b, lam - a;
    const double n = v.norm();
    if (n > 0.0)
      v /= n;
    else
      v << 1.0, 0.0;
    return {lam, v};
  }
  const Eigen::MatrixXcd h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  const Eigen::Index last = h.rows() - 1;
  return {es.eigenvalues()[last], es.eigenvectors().col(last)};
}

void fix_phase(Eigen::VectorXcd& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double a = std::abs(v[i]);
    if (a > 1e-14) {
      v *= std::conj(v[i]) / a;
      v[i] = a;
      return;
    }
  }
}

}  // namespace

OverlapResult seesaw_maximize(const Eigen::MatrixXcd& op, const ProductPureState& start, const SeesawOptions& options) {
  const Eigen::VectorXcd psi0 = start.state_vector();
  if (op.rows() != psi0.size() || op.cols() != psi0.size())
    throw ValidationError("witness operator dimension does not match start state");
  const double scale = 1.0 + op.cwiseAbs().maxCoeff();

  std::vector<Eigen::VectorXcd> f = start.factors();
  double value = psi0.dot(op * psi0).real();
  int sweeps = 0;
  bool converged = false;
  while (sweeps < options.max_iters) {
    const double sweep_start = value;
    ++sweeps;
    for (std::size_t k = 0; k < f.size(); ++k) {
      const Eigen::MatrixXcd m = contract(op, f, k);
      if (hermiticity_error(m) > 1e-10 * scale)
        throw ConvergenceError("see-saw contraction is not Hermitian; witness operator is corrupted");
      const TopEigen top = top_eigen(m);
      if (top.value < value - 1e-12 * scale)
        throw ConvergenceError("see-saw objective decreased from " + std::to_string(value) + " to " +
                               std::to_string(top.value));
      const double current = f[k].dot(m * f[k]).real();
      // Keep the current factor when it already attains the top eigenvalue;
      // this also settles degenerate eigenspaces deterministically.
      if (current < top.value - 1e-14 * scale) {
        f[k] = top.vector;
        fix_phase(f[k]);
        value = top.value;
      } else {
        value = std::max(value, current);
      }
    }
    if (value - sweep_start <= options.tol * std::max(1.0, std::abs(value))) {
      converged = true;
      break;
    }
  }
  ProductPureState best(std::move(f));
  const double final_value = overlap(op, best);
  return {.F_value = final_value,
          .argmax = std::move(best),
          .restarts_used = 1,
          .iterations = {sweeps},
          .converged = converged,
          .confident = true,
          .basins = {}};
}

OverlapResult seesaw_maximize(const WitnessDirection& witness, const ProductPureState& start,
                              const SeesawOptions& options) {
  if (start.dims() != witness.basis->dims()) throw ValidationError("start state dims do not match witness basis");
  return seesaw_maximize(witness.operator_form(), start, options);
}

std::vector<ProductPureState> axis_grid(const Dims& dims, std::size_t max_states) {
  std::vector<std::vector<Eigen::VectorXcd>> local(dims.size());
  std::size_t total = 1;
  for (std::size_t p = 0; p < dims.size(); ++p) {
    const int d = dims[p];
    const double s = 1.0 / std::sqrt(2.0);
    for (int j = 0; j < d; ++j) local[p].push_back(Eigen::VectorXcd::Unit(d, j));
    for (int j = 0; j < d; ++j)
      for (int k = j + 1; k < d; ++k)
        for (cplx phase : {cplx(1, 0), cplx(-1, 0), cplx(0, 1), cplx(0, -1)}) {
          Eigen::VectorXcd v = Eigen::VectorXcd::Zero(d);
          v[j] = s;
          v[k] = s * phase;
          local[p].push_back(std::move(v));
        }
    total *= local[p].size();
    if (total > max_states) return {};
  }
  std::vector<ProductPureState> out;
  out.reserve(total);
  std::vector<std::size_t> idx(dims.size(), 0);
  for (std::size_t n = 0; n < total; ++n) {
    std::vector<Eigen::VectorXcd> f;
    for (std::size_t p = 0; p < dims.size(); ++p) f.push_back(local[p][idx[p]]);
    out.emplace_back(std::move(f));
    for (std::size_t p = dims.size(); p-- > 0;) {
      if (++idx[p] < local[p].size()) break;
      idx[p] = 0;
    }
  }
  return out;
}

namespace {

constexpr int kScreenSweeps = 30;
constexpr std::size_t kFinalists = 8;

bool same_state(const ProductPureState& a, const ProductPureState& b) {
  const cplx ov = a.state_vector().dot(b.state_vector());
  return std::norm(ov) > 1.0 - 1e-9;
}

}  // namespace

OverlapResult maximize_overlap(const Eigen::MatrixXcd& op, const Dims& dims, const OverlapConfig& config,
                               std::span<const ProductPureState> extra_starts) {
  if (config.restarts < 1) throw ValidationError("restart budget must be >= 1");
  if (op.rows() != total_dim(dims)) throw ValidationError("witness operator dimension does not match dims");

  std::vector<ProductPureState> starts;
  if (config.grid_starts) starts = axis_grid(dims);
  starts.insert(starts.end(), extra_starts.begin(), extra_starts.end());
  std::mt19937_64 rng(config.seed);
  for (int i = 0; i < config.restarts; ++i) starts.push_back(random_product(dims, rng));

  // Every start gets a short screening run; only the leading unconverged
  // runs continue to full convergence.
  SeesawOptions screen = config.seesaw;
  screen.max_iters = std::min(screen.max_iters, kScreenSweeps);
  std::vector<OverlapResult::Basin> runs;
  runs.reserve(starts.size());
  std::vector<int> iterations;
  iterations.reserve(starts.size());
  std::vector<std::size_t> pending;
  for (std::size_t i = 0; i < starts.size(); ++i) {
    OverlapResult r = seesaw_maximize(op, starts[i], screen);
    iterations.push_back(r.iterations.front());
    if (!r.converged) pending.push_back(i);
    runs.push_back({r.F_value, std::move(r.argmax)});
  }
  std::stable_sort(pending.begin(), pending.end(),
                   [&](std::size_t a, std::size_t b) { return runs[a].value > runs[b].value; });
  if (pending.size() > kFinalists) pending.resize(kFinalists);
  bool all_converged = true;
  SeesawOptions rest = config.seesaw;
  rest.max_iters = std::max(1, config.seesaw.max_iters - screen.max_iters);
  for (std::size_t i : pending) {
    OverlapResult r = seesaw_maximize(op, runs[i].state, rest);
    iterations[i] += r.iterations.front();
    all_converged = all_converged && r.converged;
    if (r.F_value >= runs[i].value) runs[i] = {r.F_value, std::move(r.argmax)};
  }
  // Stable sort keeps start order among ties.
  std::stable_sort(runs.begin(), runs.end(), [](const auto& a, const auto& b) { return a.value > b.value; });

  OverlapResult out{.F_value = runs.front().value,
                    .argmax = runs.front().state,
                    .restarts_used = static_cast<int>(starts.size()),
                    .iterations = std::move(iterations),
                    .converged = all_converged,
                    .confident = runs.size() < 2 || runs[0].value - runs[1].value <= kBasinAgreement,
                    .basins = {}};
  for (auto& run : runs) {
    const bool dup = std::any_of(out.basins.begin(), out.basins.end(), [&](const auto& b) {
      return std::abs(b.value - run.value) < 1e-9 && same_state(b.state, run.state);
    });
    if (!dup) out.basins.push_back(std::move(run));
  }
  return out;
}

OverlapResult maximize_overlap(const WitnessDirection& witness, const OverlapConfig& config,
                               std::span<const ProductPureState> extra_starts) {
  return maximize_overlap(witness.operator_form(), witness.basis->dims(), config, extra_starts);
}

}  // namespace hullmeter
