#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "hullmeter/bloch_basis.hpp"
#include "hullmeter/hull_measure.hpp"
#include "hullmeter/quantum_states.hpp"
#include "hullmeter/separability_bounds.hpp"

namespace hullmeter {

inline constexpr int kSchemaVersion = 1;

// State file, schema 1:
//   {"schema": 1, "dims": [2, 2], "matrix": [[[re, im], ...], ...],
//    "metadata": {"label": "...", "source": "..."}}
// A batch is {"schema": 1, "states": [<state>, ...]}.
struct StateMetadata {
  std::string label;
  std::string source;
};

nlohmann::json state_to_json(const DensityMatrix& rho, const StateMetadata& meta = {});
// Parses and validates; any problem raises ValidationError.
DensityMatrix state_from_json(const nlohmann::json& j);
// Accepts a single state or a batch.
std::vector<DensityMatrix> states_from_json(const nlohmann::json& j);

nlohmann::json batch_to_json(const std::vector<DensityMatrix>& states, const StateMetadata& meta = {});

// Doubles are written in shortest round-trip form, so parse(dump(x)) == x bitwise.
std::string dump_json(const nlohmann::json& j);
nlohmann::json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

// FNV-1a 64 over dims and the raw matrix doubles, as 16 hex digits.
std::string state_digest(const DensityMatrix& rho);

struct ReportOptions {
  bool timings = false;
  double ppt_tol = 1e-10;
};

nlohmann::json make_report(const DensityMatrix& rho, const MeasureResult& result, const SolverConfig& config,
                           const ReportOptions& options = {});
nlohmann::json ppt_report_json(const PptReport& rep);
nlohmann::json config_to_json(const SolverConfig& config);
nlohmann::json basis_to_json(const BlochBasis& basis);

// Flattens any report into aligned "dotted.key  value" lines.
std::string format_text(const nlohmann::json& j);

}  // namespace hullmeter
