#include "essh/runner/cli.hpp"

#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "essh/runner/config.hpp"
#include "essh/runner/run.hpp"

namespace essh::runner {
namespace {

struct Flags {
  std::optional<std::string> config;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  std::optional<std::int64_t> n_cells;
  std::optional<double> hop[5];
  std::optional<std::string> vary;
  std::optional<double> from;
  std::optional<double> to;
  std::optional<std::int64_t> steps;
  std::optional<double> t_max;
  std::optional<std::int64_t> t_points;
  std::optional<std::int64_t> k_points;
};

void add_flags(CLI::App& app, Flags& f) {
  app.add_option("--config", f.config, "JSON experiment config");
  app.add_option("--out", f.out, "output directory");
  app.add_option("--seed", f.seed, "random seed");
  app.add_option("--threads", f.threads, "worker threads");
  app.add_option("--n-cells", f.n_cells, "unit cells in the chain");
  for (Hopping h : kAllHoppings) {
    app.add_option("--" + std::string(to_string(h)), f.hop[static_cast<int>(h)], "hopping amplitude");
  }
  app.add_option("--vary", f.vary, "hopping varied along the path");
  app.add_option("--from", f.from, "path start value");
  app.add_option("--to", f.to, "path end value");
  app.add_option("--steps", f.steps, "path samples");
  app.add_option("--t-max", f.t_max, "last time point");
  app.add_option("--t-points", f.t_points, "time points");
  app.add_option("--k-points", f.k_points, "momentum grid size");
}

template <class T>
void set_if(nlohmann::json& doc, std::initializer_list<const char*> key, const std::optional<T>& value) {
  if (!value) return;
  nlohmann::json* node = &doc;
  for (const char* k : key) node = &(*node)[k];
  *node = *value;
}

nlohmann::json load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, "cannot read config file");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_json_text(buf.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path + ":" + e.where(), e.message());
  }
}

nlohmann::json merged_document(const std::string& kind, const Flags& f) {
  nlohmann::json doc = f.config ? load_file(*f.config) : nlohmann::json::object();
  if (!doc.is_object()) throw ConfigError("/", "config root must be an object");
  doc["kind"] = kind;
  set_if(doc, {"out"}, f.out);
  set_if(doc, {"seed"}, f.seed);
  set_if(doc, {"threads"}, f.threads);
  set_if(doc, {"n_cells"}, f.n_cells);
  for (Hopping h : kAllHoppings) {
    if (f.hop[static_cast<int>(h)]) doc["params"][std::string(to_string(h))] = *f.hop[static_cast<int>(h)];
  }
  set_if(doc, {"path", "vary"}, f.vary);
  set_if(doc, {"path", "from"}, f.from);
  set_if(doc, {"path", "to"}, f.to);
  set_if(doc, {"path", "steps"}, f.steps);
  set_if(doc, {"time", "t_max"}, f.t_max);
  set_if(doc, {"time", "t_points"}, f.t_points);
  set_if(doc, {"thresholds", "k_points"}, f.k_points);
  return doc;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Extended SSH chain experiments"};
  app.require_subcommand(1);
  Flags flags;
  for (ExperimentKind k : all_kinds()) {
    auto* sub = app.add_subcommand(std::string(to_string(k)), "run the " + std::string(to_string(k)) + " experiment");
    add_flags(*sub, flags);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  }

  const auto* chosen = app.get_subcommands().front();
  ExperimentConfig config;
  try {
    config = config_from_json(merged_document(chosen->get_name(), flags));
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  }
  const int status = run(config, err);
  if (status == kSuccess) out << "wrote " << config.out.string() << "\n";
  return status;
}

}  // namespace essh::runner
