#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hullmeter/hullmeter.hpp"

using namespace hullmeter;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

std::vector<DensityMatrix> random_states(const Dims& dims, int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<DensityMatrix> out;
  for (int i = 0; i < n; ++i) out.push_back(random_density(dims, rng));
  return out;
}

std::vector<double> alphas(const std::vector<DensityMatrix>& states) {
  std::vector<double> a;
  for (const auto& r : measure_batch(states, SolverConfig{})) a.push_back(r.alpha);
  return a;
}

const std::vector<double>& theta_grid() {
  static const std::vector<double> g{std::numbers::pi / 12, std::numbers::pi / 8, std::numbers::pi / 6,
                                     std::numbers::pi / 4, 3 * std::numbers::pi / 8};
  return g;
}

Outcome ghz_closed_form() {
  double worst = 0.0;
  for (double t : theta_grid()) worst = std::max(worst, std::abs(estimate_alpha(ghz_theta(t)).alpha - ghz_alpha(t)));
  return {worst <= 1e-3, "max |alpha - 1/(1+2 sin2t)| = " + fmt("%.2e", worst)};
}

Outcome ghz_ppt() {
  double worst = 0.0;
  for (double t : theta_grid()) worst = std::max(worst, std::abs(ppt_boundary_V(ghz_theta(t)).V_star - ghz_alpha(t)));
  return {worst <= 1e-8, "max |V* - 1/(1+2 sin2t)| = " + fmt("%.2e", worst)};
}

double ppt_gap(const Dims& dims, int n, std::uint64_t seed) {
  const auto states = random_states(dims, n, seed);
  const auto a = alphas(states);
  double worst = 0.0;
  for (std::size_t i = 0; i < states.size(); ++i) {
    const auto rep = ppt_boundary_V(states[i]);
    if (!rep.exact) return INFINITY;
    worst = std::max(worst, std::abs((1.0 - a[i]) - rep.C_ppt));
  }
  return worst;
}

Outcome oracle_equivalence() {
  const double w22 = ppt_gap({2, 2}, 50, 3001);
  const double w23 = ppt_gap({2, 3}, 20, 3002);
  return {w22 <= 5e-3 && w23 <= 5e-3,
          "max |C - C_ppt|: 2x2 (50) " + fmt("%.2e", w22) + ", 2x3 (20) " + fmt("%.2e", w23)};
}

Outcome separable_soundness() {
  std::mt19937_64 rng(4001);
  std::vector<DensityMatrix> products, mixtures;
  for (int i = 0; i < 200; ++i) products.push_back(random_product({2, 2}, rng).projector());
  std::uniform_int_distribution<int> terms(1, 4);
  std::exponential_distribution<double> expo(1.0);
  for (int i = 0; i < 200; ++i) {
    const int k = terms(rng);
    std::vector<double> w(k);
    std::vector<DensityMatrix> parts;
    double sum = 0.0;
    for (int j = 0; j < k; ++j) {
      w[j] = expo(rng);
      sum += w[j];
      parts.push_back(random_product({2, 2}, rng).projector());
    }
    for (double& x : w) x /= sum;
    w.back() = 1.0 - std::accumulate(w.begin(), w.end() - 1, 0.0);
    mixtures.push_back(mix(w, parts));
  }
  double worst = 0.0;
  int all_rejected = 0;
  int exact_zero = 0;
  for (const auto* set : {&products, &mixtures}) {
    for (const auto& r : measure_batch(*set, SolverConfig{})) {
      worst = std::max(worst, r.C);
      if (r.accepted_directions == 0) {
        ++all_rejected;
        if (r.C == 0.0) ++exact_zero;
      }
    }
  }
  return {worst <= 5e-3 && exact_zero == all_rejected,
          "max C = " + fmt("%.2e", worst) + ", exact zeros " + std::to_string(exact_zero) + "/" +
              std::to_string(all_rejected) + " all-rejected runs"};
}

double scaling_gap(const Dims& dims, int n, std::uint64_t seed) {
  const auto states = random_states(dims, n, seed);
  const auto base = alphas(states);
  std::vector<DensityMatrix> mixed;
  std::vector<double> expect;
  for (std::size_t i = 0; i < states.size(); ++i)
    for (double p : {0.25, 0.5, 0.75, 1.0}) {
      mixed.push_back(werner_mix(states[i], p));
      expect.push_back(std::min(1.0, base[i] / p));
    }
  const auto got = alphas(mixed);
  double worst = 0.0;
  for (std::size_t i = 0; i < got.size(); ++i) worst = std::max(worst, std::abs(got[i] - expect[i]));
  return worst;
}

Outcome scaling_law() {
  const double w22 = scaling_gap({2, 2}, 20, 5001);
  const double w23 = scaling_gap({2, 3}, 10, 5002);
  return {w22 <= 5e-3 && w23 <= 5e-3,
          "max |alpha(p) - min(1, alpha/p)|: 2x2 (20x4) " + fmt("%.2e", w22) + ", 2x3 (10x4) " + fmt("%.2e", w23)};
}

Outcome resource_sufficiency() {
  const auto states = random_states({2, 2}, 500, 6001);
  const auto a = alphas(states);
  const auto basis = build_basis({2, 2});
  double worst = INFINITY;
  for (std::size_t i = 0; i < states.size(); ++i)
    worst = std::min(worst, a[i] - resource_count(vectorize(states[i], basis)).shrink_factor);
  const auto bell = ghz_theta(std::numbers::pi / 4);
  const double bound = resource_count(vectorize(bell, basis)).shrink_factor;
  const double bell_alpha = estimate_alpha(bell).alpha;
  const bool tight = std::abs(bound - 1.0 / 3.0) <= 1e-12 && std::abs(bell_alpha - bound) <= 1e-3;
  return {worst >= -5e-3 && tight, "min (alpha - 1/max(1,N_R)) = " + fmt("%.3f", worst) + " over 500; Bell bound " +
                                       fmt("%.6f", bound) + " vs alpha " + fmt("%.6f", bell_alpha)};
}

double unitary_gap(const Dims& dims, int n, int per_state, std::uint64_t seed) {
  const auto states = random_states(dims, n, seed);
  std::mt19937_64 rng(seed + 1);
  std::vector<DensityMatrix> rotated;
  for (const auto& rho : states)
    for (int k = 0; k < per_state; ++k) {
      std::vector<Eigen::MatrixXcd> us;
      for (int d : dims) us.push_back(random_unitary(d, rng));
      rotated.push_back(apply_local_unitaries(rho, us));
    }
  const auto base = alphas(states);
  const auto got = alphas(rotated);
  double worst = 0.0;
  for (std::size_t i = 0; i < got.size(); ++i) worst = std::max(worst, std::abs(got[i] - base[i / per_state]));
  return worst;
}

Outcome unitary_invariance() {
  const double w22 = unitary_gap({2, 2}, 20, 5, 7001);
  const double w23 = unitary_gap({2, 3}, 10, 5, 7002);
  return {w22 <= 5e-3 && w23 <= 5e-3,
          "max |dC|: 2x2 (20x5) " + fmt("%.2e", w22) + ", 2x3 (10x5) " + fmt("%.2e", w23)};
}

Outcome structural_numerics() {
  double ortho = 0.0, trace = 0.0, roundtrip = 0.0;
  for (const Dims& dims : {Dims{2, 2}, Dims{2, 3}, Dims{3, 3}}) {
    const auto b = build_basis(dims);
    ortho = std::max(ortho, orthonormality_error(*b));
    trace = std::max(trace, trace_error(*b));
    for (const auto& rho : random_states(dims, 100, 8001))
      roundtrip = std::max(roundtrip, (devectorize(vectorize(rho, b)) - rho.matrix()).cwiseAbs().maxCoeff());
  }

  // The see-saw throws on any decrease; this also checks the whole trajectory
  // by replaying each run truncated after k sweeps.
  int decreases = 0;
  int runs = 0;
  std::mt19937_64 rng(8002);
  std::normal_distribution<double> nd;
  for (const Dims& dims : {Dims{2, 2}, Dims{2, 3}}) {
    const auto b = build_basis(dims);
    for (int k = 0; k < 20; ++k) {
      Eigen::VectorXd c(b->size());
      for (int i = 0; i < c.size(); ++i) c[i] = nd(rng);
      const Eigen::MatrixXcd L = b->combine(c);
      const auto start = random_product(dims, rng);
      double prev = overlap(L, start);
      for (int sweeps = 1; sweeps <= 40; ++sweeps) {
        const double v = seesaw_maximize(L, start, {.tol = 0.0, .max_iters = sweeps}).F_value;
        if (v < prev - 1e-12) ++decreases;
        prev = v;
      }
      ++runs;
    }
  }

  const double F = maximize_overlap(ghz_witness()).F_value;
  const bool ok = ortho <= 1e-12 && trace <= 1e-12 && roundtrip <= 1e-12 && decreases == 0 && std::abs(F - 1.0) <= 1e-9;
  return {ok, "orthonormality " + fmt("%.1e", ortho) + ", trace " + fmt("%.1e", trace) + ", roundtrip " +
                  fmt("%.1e", roundtrip) + ", see-saw decreases " + std::to_string(decreases) + "/" +
                  std::to_string(runs) + " runs, |F - 1| = " + fmt("%.1e", std::abs(F - 1.0))};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_s;  // 0 = no runtime limit
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "Werner-GHZ closed form", 60, ghz_closed_form},
      {2, "PPT consistency on the family", 5, ghz_ppt},
      {3, "oracle equivalence (exact regime)", 600, oracle_equivalence},
      {4, "separable soundness", 600, separable_soundness},
      {5, "scaling law", 0, scaling_law},
      {6, "resource bound sufficiency", 0, resource_sufficiency},
      {7, "local-unitary invariance", 0, unitary_invariance},
      {8, "structural numerics", 0, structural_numerics},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double s = std::chrono::duration<double>(Clock::now() - t0).count();
    const bool in_time = c.limit_s <= 0 || s < c.limit_s;
    const bool pass = o.pass && in_time;
    failed += pass ? 0 : 1;
    std::printf("%s  %d  %-34s %s  [%.1fs%s]\n", pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), s,
                in_time ? "" : " over limit");
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
