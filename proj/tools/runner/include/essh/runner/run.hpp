#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "essh/runner/config.hpp"
#include "essh/runner/output.hpp"

namespace essh::runner {

enum ExitCode : int { kSuccess = 0, kConfigError = 1, kNumericalFailure = 2 };

struct Artifact {
  std::string path;
  std::string content;
};

struct ExperimentOutput {
  std::vector<Artifact> artifacts;
  std::vector<Failure> failures;
};

/// Computes every artifact of one experiment in memory. Numerical failures
/// of a single-target experiment propagate as essh::Error; path-study records
/// per-endpoint failures instead and keeps the remaining endpoints.
ExperimentOutput run_experiment(const ExperimentConfig& config);

/// Validates, computes, writes the artifacts and the manifest. Config errors
/// are reported before anything touches the output directory.
int run(const ExperimentConfig& config, std::ostream& log);

}  // namespace essh::runner
