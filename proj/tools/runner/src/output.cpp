#include "essh/runner/output.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <stdexcept>

#include <openssl/evp.h>

#include "essh/runner/config.hpp"

namespace essh::runner {
namespace fs = std::filesystem;

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 digest failed");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xF];
  }
  return out;
}

namespace {

std::vector<std::string> previous_run_files(const fs::path& root) {
  std::ifstream in(root / OutputDir::kManifestName);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception&) {
    throw ConfigError("/out", "output directory has an unreadable manifest.json");
  }
  std::vector<std::string> files;
  if (doc.contains("files") && doc["files"].is_array()) {
    for (const auto& f : doc["files"]) {
      if (f.contains("path") && f["path"].is_string()) files.push_back(f["path"].get<std::string>());
    }
  }
  return files;
}

}  // namespace

void OutputDir::check_usable(const fs::path& root) {
  std::error_code ec;
  if (!fs::exists(root, ec)) return;
  if (!fs::is_directory(root, ec)) throw ConfigError("/out", "'" + root.string() + "' is not a directory");

  std::set<fs::path> owned{root / kManifestName};
  const bool has_manifest = fs::exists(root / kManifestName, ec);
  if (has_manifest) {
    for (const auto& f : previous_run_files(root)) owned.insert((root / f).lexically_normal());
  }
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_directory()) continue;
    if (!owned.count(e.path().lexically_normal())) {
      throw ConfigError("/out", "output directory holds files from outside a previous run: " +
                                    fs::relative(e.path(), root).generic_string());
    }
  }
}

OutputDir::OutputDir(fs::path root) : root_(std::move(root)) {
  check_usable(root_);
  if (fs::exists(root_ / kManifestName)) {
    for (const auto& f : previous_run_files(root_)) fs::remove(root_ / f);
    fs::remove(root_ / kManifestName);
    // drop now-empty subdirectories, deepest first
    std::vector<fs::path> dirs;
    for (const auto& e : fs::recursive_directory_iterator(root_)) {
      if (e.is_directory()) dirs.push_back(e.path());
    }
    std::sort(dirs.rbegin(), dirs.rend());
    for (const auto& d : dirs) {
      if (fs::is_empty(d)) fs::remove(d);
    }
  }
  fs::create_directories(root_);
}

void OutputDir::write(const std::string& relative, std::string_view content) {
  const fs::path target = root_ / relative;
  fs::create_directories(target.parent_path());
  std::ofstream out(target, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + target.string() + "' for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.close();
  if (!out) throw std::runtime_error("failed writing '" + target.string() + "'");
  entries_.push_back({fs::path(relative).generic_string(), content.size(), sha256_hex(content)});
}

void OutputDir::add_failure(std::string scope, std::string error) {
  failures_.push_back({std::move(scope), std::move(error)});
}

void OutputDir::finish(const nlohmann::json& config, std::string_view status) {
  auto sorted = entries_;
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.path < b.path; });
  nlohmann::json files = nlohmann::json::array();
  for (const auto& e : sorted) files.push_back({{"path", e.path}, {"bytes", e.bytes}, {"sha256", e.sha256}});
  nlohmann::json failures = nlohmann::json::array();
  for (const auto& f : failures_) failures.push_back({{"scope", f.scope}, {"error", f.error}});
  const nlohmann::json doc = {
      {"status", std::string(status)}, {"config", config}, {"files", files}, {"failures", failures}};
  const std::string text = doc.dump(2) + "\n";
  std::ofstream out(root_ / kManifestName, std::ios::binary | std::ios::trunc);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw std::runtime_error("failed writing manifest");
}

}  // namespace essh::runner
