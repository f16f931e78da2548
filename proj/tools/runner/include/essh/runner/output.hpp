#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace essh::runner {

/// Lowercase hex SHA-256 of `data`.
std::string sha256_hex(std::string_view data);

struct ManifestEntry {
  std::string path;  // relative to the output directory, '/' separated
  std::uintmax_t bytes = 0;
  std::string sha256;
};

struct Failure {
  std::string scope;  // artifact or endpoint the failure belongs to
  std::string error;
};

/// Output directory of one run. Every artifact goes through write(), so the
/// manifest written by finish() lists exactly the files of the run.
class OutputDir {
 public:
  static constexpr std::string_view kManifestName = "manifest.json";

  /// Checks that `root` can be used: it must be absent, empty, or hold a
  /// previous run (a manifest.json). Nothing is created or removed.
  static void check_usable(const std::filesystem::path& root);

  /// Creates `root`, deleting the files a previous manifest lists.
  explicit OutputDir(std::filesystem::path root);

  void write(const std::string& relative, std::string_view content);
  void add_failure(std::string scope, std::string error);

  const std::vector<ManifestEntry>& entries() const noexcept { return entries_; }
  const std::vector<Failure>& failures() const noexcept { return failures_; }
  const std::filesystem::path& root() const noexcept { return root_; }

  /// Writes manifest.json with entries sorted by path. `config` is embedded
  /// verbatim.
  void finish(const nlohmann::json& config, std::string_view status);

 private:
  std::filesystem::path root_;
  std::vector<ManifestEntry> entries_;
  std::vector<Failure> failures_;
};

}  // namespace essh::runner
