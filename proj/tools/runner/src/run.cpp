#include "essh/runner/run.hpp"

#include <filesystem>
#include <ostream>

#include "essh/error.hpp"

namespace essh::runner {
namespace {

// Settings that do not change any artifact stay out of the manifest, so runs
// that differ only in thread count or destination produce identical bytes.
nlohmann::json recorded_config(const ExperimentConfig& c) {
  auto doc = config_to_json(c);
  doc.erase("threads");
  doc.erase("out");
  return doc;
}

}  // namespace

int run(const ExperimentConfig& config, std::ostream& log) {
  try {
    validate(config);
    OutputDir::check_usable(config.out);
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << "\n";
    return kConfigError;
  }

  ExperimentOutput result;
  try {
    result = run_experiment(config);
  } catch (const InvalidArgument& e) {
    log << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const ChainTooShort& e) {
    log << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const Error& e) {
    result.artifacts.clear();
    result.failures.push_back({std::string(to_string(config.kind)), e.what()});
  }

  try {
    OutputDir dir(config.out);
    for (const auto& a : result.artifacts) dir.write(a.path, a.content);
    for (const auto& f : result.failures) dir.add_failure(f.scope, f.error);
    dir.finish(recorded_config(config), result.failures.empty() ? "ok" : "failed");
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::filesystem::filesystem_error& e) {
    log << "config error: output directory not writable: " << e.what() << "\n";
    return kConfigError;
  }

  for (const auto& f : result.failures) log << "failed: " << f.scope << ": " << f.error << "\n";
  return result.failures.empty() ? kSuccess : kNumericalFailure;
}

}  // namespace essh::runner
