#include "hullmeter/state_io.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "hullmeter/error.hpp"

namespace hullmeter {

using nlohmann::json;

namespace {

json complex_matrix(const Eigen::MatrixXcd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

json real_vector(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

double number_at(const json& j, const char* what) {
  if (!j.is_number()) throw ValidationError(std::string("expected a number in ") + what);
  return j.get<double>();
}

}  // namespace

json state_to_json(const DensityMatrix& rho, const StateMetadata& meta) {
  json j;
  j["schema"] = kSchemaVersion;
  j["dims"] = rho.dims();
  j["matrix"] = complex_matrix(rho.matrix());
  if (!meta.label.empty() || !meta.source.empty()) {
    j["metadata"] = json::object();
    if (!meta.label.empty()) j["metadata"]["label"] = meta.label;
    if (!meta.source.empty()) j["metadata"]["source"] = meta.source;
  }
  return j;
}

DensityMatrix state_from_json(const json& j) {
  if (!j.is_object()) throw ValidationError("state must be a JSON object");
  if (!j.contains("schema") || !j["schema"].is_number_integer() || j["schema"].get<int>() != kSchemaVersion)
    throw ValidationError("unsupported or missing schema version");
  if (!j.contains("dims") || !j["dims"].is_array() || j["dims"].empty()) throw ValidationError("missing dims");
  Dims dims;
  for (const auto& d : j["dims"]) {
    if (!d.is_number_integer()) throw ValidationError("dims must be integers");
    dims.push_back(d.get<int>());
  }
  for (int d : dims)
    if (d < 2) throw ValidationError("subsystem dimension must be >= 2");
  const int n = total_dim(dims);
  if (n > kDefaultDimCap) throw ValidationError("total dimension " + std::to_string(n) + " exceeds cap");
  if (!j.contains("matrix") || !j["matrix"].is_array() || static_cast<int>(j["matrix"].size()) != n)
    throw ValidationError("matrix must have " + std::to_string(n) + " rows");
  Eigen::MatrixXcd m(n, n);
  for (int r = 0; r < n; ++r) {
    const auto& row = j["matrix"][r];
    if (!row.is_array() || static_cast<int>(row.size()) != n)
      throw ValidationError("matrix row " + std::to_string(r) + " must have " + std::to_string(n) + " entries");
    for (int c = 0; c < n; ++c) {
      const auto& e = row[c];
      if (!e.is_array() || e.size() != 2) throw ValidationError("matrix entries must be [re, im] pairs");
      m(r, c) = cplx(number_at(e[0], "matrix"), number_at(e[1], "matrix"));
    }
  }
  return DensityMatrix(std::move(dims), std::move(m));
}

std::vector<DensityMatrix> states_from_json(const json& j) {
  if (j.is_object() && j.contains("states")) {
    if (!j["states"].is_array()) throw ValidationError("states must be an array");
    std::vector<DensityMatrix> out;
    for (const auto& s : j["states"]) out.push_back(state_from_json(s));
    return out;
  }
  return {state_from_json(j)};
}

json batch_to_json(const std::vector<DensityMatrix>& states, const StateMetadata& meta) {
  json j;
  j["schema"] = kSchemaVersion;
  j["states"] = json::array();
  for (std::size_t i = 0; i < states.size(); ++i) {
    StateMetadata m = meta;
    if (!m.label.empty()) m.label += "#" + std::to_string(i);
    j["states"].push_back(state_to_json(states[i], m));
  }
  return j;
}

std::string dump_json(const json& j) { return j.dump(2) + "\n"; }

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("malformed JSON in " + path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << text;
}

std::string state_digest(const DensityMatrix& rho) {
  std::uint64_t h = 1469598103934665603ULL;
  auto feed = [&](const void* p, std::size_t n) {
    const auto* b = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= b[i];
      h *= 1099511628211ULL;
    }
  };
  for (int d : rho.dims()) {
    const std::int64_t v = d;
    feed(&v, sizeof v);
  }
  for (Eigen::Index r = 0; r < rho.matrix().rows(); ++r)
    for (Eigen::Index c = 0; c < rho.matrix().cols(); ++c) {
      const double re = rho.matrix()(r, c).real();
      const double im = rho.matrix()(r, c).imag();
      feed(&re, sizeof re);
      feed(&im, sizeof im);
    }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

json config_to_json(const SolverConfig& config) {
  json j;
  j["seed"] = config.seed;
  j["direction_samples"] = config.direction_samples;
  j["refine_steps"] = config.refine_steps;
  j["F_restarts"] = config.F_restarts;
  j["tol_ratio"] = config.tol_ratio;
  j["cut_rounds"] = config.cut_rounds;
  j["escalation_factor"] = config.escalation_factor;
  j["seesaw_tol"] = config.seesaw.tol;
  j["seesaw_max_iters"] = config.seesaw.max_iters;
  j["normalization"] = config.normalization ? json(*config.normalization) : json(nullptr);
  return j;
}

json ppt_report_json(const PptReport& rep) {
  json j;
  j["V_star"] = rep.V_star;
  j["C_ppt"] = rep.C_ppt;
  j["min_eigenvalue"] = rep.min_eigenvalue;
  j["min_eigenvalue_at_boundary"] = rep.min_eigenvalue_at_boundary;
  j["bisection_steps"] = rep.bisection_steps;
  j["exact"] = rep.exact;
  return j;
}

json make_report(const DensityMatrix& rho, const MeasureResult& result, const SolverConfig& config,
                 const ReportOptions& options) {
  json j;
  j["schema"] = kSchemaVersion;
  j["version"] = std::string("hullmeter ") + HULLMETER_VERSION;
  j["input"] = {{"digest", state_digest(rho)}, {"dims", rho.dims()}};
  json cfg = config_to_json(config);
  cfg["ppt_tol"] = options.ppt_tol;
  j["config"] = std::move(cfg);

  j["alpha"] = result.alpha;
  j["C"] = result.C;
  j["C_normalized"] = result.C_normalized ? json(*result.C_normalized) : json(nullptr);

  bool exact_ppt = false;
  if (rho.dims().size() == 2) {
    const PptReport ppt = ppt_boundary_V(rho, options.ppt_tol);
    exact_ppt = ppt.exact;
    j["ppt"] = ppt_report_json(ppt);
  } else {
    j["ppt"] = nullptr;
  }

  const ResourceBound rb = resource_count(vectorize(rho, build_basis(rho.dims())));
  if (rb.supported) {
    j["resource_bound"] = {{"supported", true},
                           {"N_R", rb.total},
                           {"shrink_factor", rb.shrink_factor},
                           {"certified_separable", rb.certified_separable},
                           {"single_body_dominated", rb.single_body_dominated}};
  } else {
    j["resource_bound"] = {{"supported", false}};
  }

  j["witness"] = {{"vector", real_vector(result.best_witness.components)},
                  {"operator", complex_matrix(result.best_witness.operator_form())},
                  {"F", result.best_F},
                  {"beta", result.best_beta}};

  const auto& d = result.diagnostics;
  j["diagnostics"] = {{"accepted_directions", d.accepted},
                      {"rejected_directions", d.rejected},
                      {"dominated_directions", d.dominated},
                      {"hull_lower_bound", d.hull_lower_bound},
                      {"hull_points", d.hull_points},
                      {"cut_rounds_used", d.cut_rounds_used},
                      {"polish_converged", d.polish_converged},
                      {"C_density_form", d.C_density_form},
                      {"alpha_density_form", d.alpha_density_form},
                      {"certificate_terms", result.certificate ? result.certificate->terms.size() : 0}};
  j["flags"] = {{"exact_ppt_dims", exact_ppt},
                {"lower_confidence_F", d.F_low_confidence},
                {"zero_vector", d.zero_vector}};
  if (options.timings)
    j["timings"] = {{"sampling_s", d.seconds_sampling}, {"refine_s", d.seconds_refine}, {"polish_s", d.seconds_polish}};
  return j;
}

json basis_to_json(const BlochBasis& basis) {
  json j;
  j["schema"] = kSchemaVersion;
  j["dims"] = basis.dims();
  j["count"] = basis.size();
  j["operators"] = json::array();
  for (int i = 0; i < basis.size(); ++i)
    j["operators"].push_back({{"label", basis.label(i)}, {"matrix", complex_matrix(basis.op(i))}});
  return j;
}

namespace {

void flatten(const json& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
  } else if (j.is_array() && !j.empty() && (j.front().is_array() || j.front().is_object())) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "[" + std::to_string(i) + "]", out);
  } else {
    out.emplace_back(prefix, j.dump());
  }
}

}  // namespace

std::string format_text(const json& j) {
  std::vector<std::pair<std::string, std::string>> rows;
  flatten(j, "", rows);
  std::size_t width = 0;
  for (const auto& r : rows) width = std::max(width, r.first.size());
  std::ostringstream os;
  for (const auto& [k, v] : rows) os << std::left << std::setw(static_cast<int>(width) + 2) << k << v << "\n";
  return os.str();
}

}  // namespace hullmeter
