#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

#include "essh/model.hpp"
#include "essh/spectra.hpp"

namespace essh::runner {

/// Rejected configuration. `where` is a JSON pointer ("/time/t_max") or a
/// "line:column" position for syntax errors.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string where, const std::string& message)
      : std::runtime_error(where.empty() ? message : where + ": " + message),
        where_(std::move(where)),
        message_(message) {}
  const std::string& where() const noexcept { return where_; }
  const std::string& message() const noexcept { return message_; }

 private:
  std::string where_;
  std::string message_;
};

enum class ExperimentKind {
  winding_diagram,
  classify_path,
  band_sweep,
  quench,
  lightcone,
  path_study,
  property_check,
};

std::string_view to_string(ExperimentKind kind) noexcept;
std::optional<ExperimentKind> parse_kind(std::string_view name) noexcept;
const std::vector<ExperimentKind>& all_kinds();

struct PathConfig {
  Hopping vary = Hopping::v;
  double from = 0.0;
  double to = 0.2;
  std::size_t steps = 21;
};

struct TimeConfig {
  double t_max = 200.0;
  std::size_t t_points = 1001;
};

struct Thresholds {
  double zero_energy_threshold = 1e-3;
  double gap_tolerance = 1e-8;
  std::size_t edge_window = 20;  // minimum edge window, in cells
  std::size_t k_points = 4096;
};

struct StudyPath {
  std::string name;
  Hopping vary = Hopping::v;
  std::vector<double> endpoints;
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::winding_diagram;
  std::size_t n_cells = 400;
  HoppingParams params;
  PathConfig path;
  TimeConfig time;
  Thresholds thresholds;
  double extension_factor = 3.0;
  EdgeSide initial_side = EdgeSide::left;
  std::optional<std::pair<double, double>> ripple_baseline;
  double velocity_quantile = 0.5;
  std::vector<StudyPath> study;
  std::size_t trials = 100;
  std::uint64_t seed = 20240601;
  unsigned threads = 1;
  std::filesystem::path out = "out";

  EdgeCriteria edge_criteria() const;
  /// Hopping set after the quench: params with path.vary set to path.to.
  HoppingParams final_params() const;
  /// Hopping set before the quench: params with path.vary set to path.from.
  HoppingParams initial_params() const;
};

/// Parses JSON text; syntax errors carry a line:column position.
nlohmann::json parse_json_text(std::string_view text);

/// Strict conversion. Unknown keys, wrong types and out-of-range values throw
/// ConfigError naming the offending key.
ExperimentConfig config_from_json(const nlohmann::json& doc);

/// Semantic checks that need the whole config (chain long enough, path not
/// degenerate, baseline inside the time grid, ...).
void validate(const ExperimentConfig& config);

nlohmann::json config_to_json(const ExperimentConfig& config);

}  // namespace essh::runner
