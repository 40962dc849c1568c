#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hullmeter/hullmeter.hpp"

using namespace hullmeter;
using nlohmann::json;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitConvergence = 3;

struct Options {
  std::vector<int> dims;
  std::uint64_t seed = 1;
  int restarts = SolverConfig{}.F_restarts;
  int directions = SolverConfig{}.direction_samples;
  int refine_steps = SolverConfig{}.refine_steps;
  double tol = SolverConfig{}.tol_ratio;
  std::optional<double> normalize;
  bool json_out = false;
  bool timings = false;
  std::string out;

  std::string input;
  double theta = 0.0;
  double V = 1.0;
  bool measure = false;
  int count = 1;
};

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--dims", o.dims, "Subsystem dimensions, e.g. 2,3")->delimiter(',');
  cmd->add_option("--seed", o.seed, "Seed for every random choice")->capture_default_str();
  cmd->add_option("--restarts", o.restarts, "See-saw restarts per F evaluation")->capture_default_str();
  cmd->add_option("--directions", o.directions, "Random witness directions to sample")->capture_default_str();
  cmd->add_option("--refine-steps", o.refine_steps, "Coordinate refinement steps")->capture_default_str();
  cmd->add_option("--tol", o.tol, "Convergence tolerance on the ratio beta")->capture_default_str();
  cmd->add_option("--normalize", o.normalize, "Also report C divided by this constant");
  cmd->add_flag("--json", o.json_out, "Write JSON instead of a text table");
  cmd->add_flag("--timings", o.timings, "Include per-phase timings in reports");
  cmd->add_option("--out", o.out, "Write output to this file instead of stdout");
}

SolverConfig config_from(const Options& o) {
  SolverConfig c;
  c.seed = o.seed;
  c.F_restarts = o.restarts;
  c.direction_samples = o.directions;
  c.refine_steps = o.refine_steps;
  c.tol_ratio = o.tol;
  c.normalization = o.normalize;
  c.dims = o.dims;
  c.validate();
  return c;
}

void emit(const Options& o, const std::string& text) {
  if (o.out.empty())
    std::cout << text << std::flush;
  else
    write_text_file(o.out, text);
}

void emit_report(const Options& o, const json& j) { emit(o, o.json_out ? dump_json(j) : format_text(j)); }

json measure_states(const Options& o, const std::vector<DensityMatrix>& states, bool batch) {
  const SolverConfig cfg = config_from(o);
  const ReportOptions ropt{.timings = o.timings, .ppt_tol = 1e-10};
  const auto results = measure_batch(states, cfg, 0);
  if (!batch) return make_report(states[0], results[0], cfg, ropt);
  json j;
  j["schema"] = kSchemaVersion;
  j["reports"] = json::array();
  for (std::size_t i = 0; i < states.size(); ++i) j["reports"].push_back(make_report(states[i], results[i], cfg, ropt));
  return j;
}

void emit_state_or_report(const Options& o, const DensityMatrix& rho, const StateMetadata& meta) {
  if (o.measure)
    emit_report(o, measure_states(o, {rho}, false));
  else
    emit(o, dump_json(state_to_json(rho, meta)));
}

int run_measure(const Options& o) {
  const json in = read_json_file(o.input);
  const auto states = states_from_json(in);
  if (states.empty()) throw ValidationError("input holds no states");
  emit_report(o, measure_states(o, states, in.contains("states")));
  return 0;
}

int run_ppt(const Options& o) {
  const json in = read_json_file(o.input);
  const auto states = states_from_json(in);
  json reports = json::array();
  for (const auto& rho : states) {
    json j;
    j["schema"] = kSchemaVersion;
    j["input"] = {{"digest", state_digest(rho)}, {"dims", rho.dims()}};
    j["ppt"] = ppt_report_json(ppt_boundary_V(rho));
    reports.push_back(std::move(j));
  }
  emit_report(o, in.contains("states") ? json{{"schema", kSchemaVersion}, {"reports", reports}} : reports[0]);
  return 0;
}

int run_random(const Options& o) {
  if (o.dims.empty()) throw ValidationError("random needs --dims");
  if (o.count < 1) throw ValidationError("--count must be >= 1");
  build_basis(o.dims);
  std::mt19937_64 rng(o.seed);
  std::vector<DensityMatrix> states;
  for (int i = 0; i < o.count; ++i) states.push_back(random_density(o.dims, rng));
  emit(o, dump_json(batch_to_json(states, {.label = "random", .source = "seed " + std::to_string(o.seed)})));
  return 0;
}

int run_basis(const Options& o) {
  if (o.dims.empty()) throw ValidationError("basis needs --dims");
  emit_report(o, basis_to_json(*build_basis(o.dims)));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Convex-hull entanglement measure C = 1 - alpha"};
  app.set_version_flag("--version", std::string("hullmeter ") + HULLMETER_VERSION);
  app.require_subcommand(1);
  Options o;

  auto* measure = app.add_subcommand("measure", "Measure every state in a state file");
  measure->add_option("input", o.input, "State file (single state or batch)")->required();
  add_common(measure, o);

  auto* ghz = app.add_subcommand("ghz", "cos(theta)|00> + sin(theta)|11>");
  ghz->add_option("--theta", o.theta, "Angle in radians")->required();
  ghz->add_flag("--measure", o.measure, "Measure instead of writing the state");
  add_common(ghz, o);

  auto* werner = app.add_subcommand("werner", "V |ghz><ghz| + (1 - V) I/4");
  werner->add_option("--theta", o.theta, "Angle in radians")->required();
  werner->add_option("--V", o.V, "Mixing weight in [0, 1]")->required();
  werner->add_flag("--measure", o.measure, "Measure instead of writing the state");
  add_common(werner, o);

  auto* random = app.add_subcommand("random", "Seeded batch of random density matrices");
  random->add_option("--count", o.count, "Number of states")->capture_default_str();
  add_common(random, o);

  auto* basis = app.add_subcommand("basis", "Print the operator basis");
  add_common(basis, o);

  auto* ppt = app.add_subcommand("ppt", "PPT boundary of every state in a state file");
  ppt->add_option("input", o.input, "State file (single state or batch)")->required();
  add_common(ppt, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    config_from(o);
    if (*measure) return run_measure(o);
    if (*ghz) {
      emit_state_or_report(o, ghz_theta(o.theta), {.label = "ghz theta=" + std::to_string(o.theta), .source = "hullmeter ghz"});
      return 0;
    }
    if (*werner) {
      const auto rho = werner_mix(ghz_theta(o.theta), o.V);
      emit_state_or_report(o, rho, {.label = "werner theta=" + std::to_string(o.theta) + " V=" + std::to_string(o.V),
                                    .source = "hullmeter werner"});
      return 0;
    }
    if (*random) return run_random(o);
    if (*basis) return run_basis(o);
    if (*ppt) return run_ppt(o);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const ConvergenceError& e) {
    std::cerr << "did not converge: " << e.what() << "\n";
    return kExitConvergence;
  }
  return kExitValidation;
}
