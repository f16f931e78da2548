#include "essh/runner/config.hpp"

#include <cmath>
#include <set>
#include <sstream>

namespace essh::runner {
namespace {

using nlohmann::json;

constexpr std::pair<ExperimentKind, std::string_view> kKindNames[] = {
    {ExperimentKind::winding_diagram, "winding-diagram"},
    {ExperimentKind::classify_path, "classify-path"},
    {ExperimentKind::band_sweep, "band-sweep"},
    {ExperimentKind::quench, "quench"},
    {ExperimentKind::lightcone, "lightcone"},
    {ExperimentKind::path_study, "path-study"},
    {ExperimentKind::property_check, "property-check"},
};

std::string child(const std::string& where, std::string_view key) {
  return where + "/" + std::string(key);
}

// Reads keys from one JSON object and rejects any it was not asked about.
class ObjectReader {
 public:
  ObjectReader(const json& node, std::string where) : node_(node), where_(std::move(where)) {
    if (!node_.is_object()) throw ConfigError(where_.empty() ? "/" : where_, "expected an object");
  }

  const json* find(std::string_view key) {
    seen_.emplace(key);
    const auto it = node_.find(std::string(key));
    return it == node_.end() ? nullptr : &*it;
  }

  double number(std::string_view key, double fallback) {
    const json* v = find(key);
    if (!v) return fallback;
    if (!v->is_number()) throw ConfigError(child(where_, key), "expected a number");
    const double x = v->get<double>();
    if (!std::isfinite(x)) throw ConfigError(child(where_, key), "must be finite");
    return x;
  }

  double positive(std::string_view key, double fallback) {
    const double x = number(key, fallback);
    if (!(x > 0.0)) throw ConfigError(child(where_, key), "must be positive");
    return x;
  }

  std::uint64_t unsigned_integer(std::string_view key, std::uint64_t fallback, std::uint64_t min = 0) {
    const json* v = find(key);
    if (!v) return fallback;
    if (v->is_number_integer() && v->get<std::int64_t>() < 0) {
      throw ConfigError(child(where_, key), "must not be negative");
    }
    if (!v->is_number_integer()) throw ConfigError(child(where_, key), "expected a non-negative integer");
    const auto x = v->get<std::uint64_t>();
    if (x < min) {
      throw ConfigError(child(where_, key), "must be at least " + std::to_string(min));
    }
    return x;
  }

  std::string string(std::string_view key, std::string fallback) {
    const json* v = find(key);
    if (!v) return fallback;
    if (!v->is_string()) throw ConfigError(child(where_, key), "expected a string");
    return v->get<std::string>();
  }

  Hopping hopping(std::string_view key, Hopping fallback) {
    const json* v = find(key);
    if (!v) return fallback;
    if (!v->is_string()) throw ConfigError(child(where_, key), "expected a hopping name");
    const auto h = parse_hopping(v->get<std::string>());
    if (!h) {
      throw ConfigError(child(where_, key), "unknown hopping '" + v->get<std::string>() +
                                                "' (expected v, w, nu, mu or gamma)");
    }
    return *h;
  }

  void finish() const {
    for (const auto& [key, value] : node_.items()) {
      if (!seen_.count(key)) throw ConfigError(child(where_, key), "unknown key");
    }
  }

  const std::string& where() const noexcept { return where_; }

 private:
  const json& node_;
  std::string where_;
  std::set<std::string, std::less<>> seen_;
};

HoppingParams read_params(const json& node, const std::string& where) {
  ObjectReader r(node, where);
  HoppingParams p;
  for (Hopping h : kAllHoppings) p[h] = r.number(to_string(h), 0.0);
  r.finish();
  return p;
}

std::vector<double> read_number_list(const json& node, const std::string& where) {
  if (!node.is_array()) throw ConfigError(where, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < node.size(); ++i) {
    const json& v = node[i];
    if (!v.is_number() || !std::isfinite(v.get<double>())) {
      throw ConfigError(where + "/" + std::to_string(i), "expected a finite number");
    }
    out.push_back(v.get<double>());
  }
  return out;
}

EdgeSide read_side(ObjectReader& r, std::string_view key, EdgeSide fallback) {
  const std::string s = r.string(key, to_string(fallback));
  if (s == "left") return EdgeSide::left;
  if (s == "right") return EdgeSide::right;
  throw ConfigError(child(r.where(), key), "expected \"left\" or \"right\"");
}

}  // namespace

std::string_view to_string(ExperimentKind kind) noexcept {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "?";
}

std::optional<ExperimentKind> parse_kind(std::string_view name) noexcept {
  for (const auto& [k, n] : kKindNames) {
    if (n == name) return k;
  }
  return std::nullopt;
}

const std::vector<ExperimentKind>& all_kinds() {
  static const std::vector<ExperimentKind> kinds = [] {
    std::vector<ExperimentKind> out;
    for (const auto& entry : kKindNames) out.push_back(entry.first);
    return out;
  }();
  return kinds;
}

EdgeCriteria ExperimentConfig::edge_criteria() const {
  EdgeCriteria c;
  c.zero_energy_threshold = thresholds.zero_energy_threshold;
  c.min_edge_cells = thresholds.edge_window;
  return c;
}

HoppingParams ExperimentConfig::final_params() const { return params.with(path.vary, path.to); }

HoppingParams ExperimentConfig::initial_params() const { return params.with(path.vary, path.from); }

json parse_json_text(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    // byte offset -> line:column
    std::size_t line = 1;
    std::size_t col = 1;
    const std::size_t stop = std::min<std::size_t>(e.byte ? e.byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::string msg = e.what();
    // drop the library's "[json.exception...] parse error at line x, column y:" prefix
    if (const auto pos = msg.find(": "); pos != std::string::npos) msg = msg.substr(pos + 2);
    throw ConfigError(std::to_string(line) + ":" + std::to_string(col), msg);
  }
}

ExperimentConfig config_from_json(const json& doc) {
  ExperimentConfig c;
  ObjectReader root(doc, "");

  const std::string kind = root.string("kind", std::string(to_string(c.kind)));
  const auto parsed_kind = parse_kind(kind);
  if (!parsed_kind) throw ConfigError("/kind", "unknown experiment kind '" + kind + "'");
  c.kind = *parsed_kind;

  c.n_cells = root.unsigned_integer("n_cells", c.n_cells, 1);
  if (const json* p = root.find("params")) c.params = read_params(*p, "/params");

  if (const json* p = root.find("path")) {
    ObjectReader r(*p, "/path");
    c.path.vary = r.hopping("vary", c.path.vary);
    c.path.from = r.number("from", c.path.from);
    c.path.to = r.number("to", c.path.to);
    c.path.steps = r.unsigned_integer("steps", c.path.steps, 2);
    r.finish();
  }

  if (const json* t = root.find("time")) {
    ObjectReader r(*t, "/time");
    c.time.t_max = r.positive("t_max", c.time.t_max);
    c.time.t_points = r.unsigned_integer("t_points", c.time.t_points, 2);
    r.finish();
  }

  if (const json* t = root.find("thresholds")) {
    ObjectReader r(*t, "/thresholds");
    c.thresholds.zero_energy_threshold = r.positive("zero_energy_threshold", c.thresholds.zero_energy_threshold);
    c.thresholds.gap_tolerance = r.positive("gap_tolerance", c.thresholds.gap_tolerance);
    c.thresholds.edge_window = r.unsigned_integer("edge_window", c.thresholds.edge_window, 1);
    c.thresholds.k_points = r.unsigned_integer("k_points", c.thresholds.k_points, 64);
    r.finish();
  }

  c.extension_factor = root.number("extension_factor", c.extension_factor);
  if (!(c.extension_factor > 1.0)) throw ConfigError("/extension_factor", "must exceed 1");

  c.initial_side = read_side(root, "initial_side", c.initial_side);

  if (const json* b = root.find("ripple_baseline")) {
    const auto w = read_number_list(*b, "/ripple_baseline");
    if (w.size() != 2) throw ConfigError("/ripple_baseline", "expected [t_begin, t_end]");
    if (!(w[0] >= 0.0 && w[1] > w[0])) throw ConfigError("/ripple_baseline", "need 0 <= t_begin < t_end");
    c.ripple_baseline = std::pair{w[0], w[1]};
  }

  c.velocity_quantile = root.number("velocity_quantile", c.velocity_quantile);
  if (!(c.velocity_quantile > 0.0 && c.velocity_quantile < 1.0)) {
    throw ConfigError("/velocity_quantile", "must lie strictly between 0 and 1");
  }

  if (const json* s = root.find("study")) {
    if (!s->is_array()) throw ConfigError("/study", "expected an array of paths");
    for (std::size_t i = 0; i < s->size(); ++i) {
      const std::string where = "/study/" + std::to_string(i);
      ObjectReader r((*s)[i], where);
      StudyPath sp;
      sp.name = r.string("name", "path" + std::to_string(i + 1));
      sp.vary = r.hopping("vary", Hopping::v);
      const json* e = r.find("endpoints");
      if (!e) throw ConfigError(where + "/endpoints", "required");
      sp.endpoints = read_number_list(*e, where + "/endpoints");
      if (sp.endpoints.empty()) throw ConfigError(where + "/endpoints", "must not be empty");
      r.finish();
      c.study.push_back(std::move(sp));
    }
  }

  c.trials = root.unsigned_integer("trials", c.trials, 1);
  c.seed = root.unsigned_integer("seed", c.seed);
  c.threads = static_cast<unsigned>(root.unsigned_integer("threads", c.threads, 1));
  c.out = root.string("out", c.out.string());
  if (c.out.empty()) throw ConfigError("/out", "must not be empty");
  root.finish();
  return c;
}

void validate(const ExperimentConfig& c) {
  const int range = std::max({c.params.max_range(), c.initial_params().max_range(), c.final_params().max_range()});
  if (range >= 0 && c.n_cells <= static_cast<std::size_t>(range)) {
    throw ConfigError("/n_cells", "chain of " + std::to_string(c.n_cells) + " cells cannot host range-" +
                                      std::to_string(range) + " hopping");
  }
  const bool uses_path = c.kind == ExperimentKind::classify_path || c.kind == ExperimentKind::band_sweep ||
                         c.kind == ExperimentKind::quench || c.kind == ExperimentKind::lightcone;
  if (uses_path && c.path.from == c.path.to) throw ConfigError("/path", "from and to must differ");

  if (c.ripple_baseline && c.ripple_baseline->second > c.time.t_max) {
    throw ConfigError("/ripple_baseline", "window ends after t_max");
  }

  if (c.kind == ExperimentKind::path_study) {
    if (c.study.empty()) throw ConfigError("/study", "path-study needs at least one path");
    std::set<std::string> names;
    for (std::size_t i = 0; i < c.study.size(); ++i) {
      const auto& sp = c.study[i];
      const std::string where = "/study/" + std::to_string(i);
      if (!names.insert(sp.name).second) throw ConfigError(where + "/name", "duplicate path name");
      if (sp.name.find_first_of("/\\") != std::string::npos || sp.name == "." || sp.name == "..") {
        throw ConfigError(where + "/name", "must be a plain file name");
      }
      for (std::size_t j = 0; j < sp.endpoints.size(); ++j) {
        const double e = sp.endpoints[j];
        if (e == c.params[sp.vary]) {
          throw ConfigError(where + "/endpoints/" + std::to_string(j), "endpoint equals the initial value");
        }
        const int r = c.params.with(sp.vary, e).max_range();
        if (r >= 0 && c.n_cells <= static_cast<std::size_t>(r)) {
          throw ConfigError(where + "/endpoints/" + std::to_string(j), "chain too short for this endpoint");
        }
      }
    }
  }
}

json config_to_json(const ExperimentConfig& c) {
  json params = json::object();
  for (Hopping h : kAllHoppings) params[std::string(to_string(h))] = c.params[h];
  json doc = {
      {"kind", std::string(to_string(c.kind))},
      {"n_cells", c.n_cells},
      {"params", params},
      {"path",
       {{"vary", std::string(to_string(c.path.vary))}, {"from", c.path.from}, {"to", c.path.to}, {"steps", c.path.steps}}},
      {"time", {{"t_max", c.time.t_max}, {"t_points", c.time.t_points}}},
      {"thresholds",
       {{"zero_energy_threshold", c.thresholds.zero_energy_threshold},
        {"gap_tolerance", c.thresholds.gap_tolerance},
        {"edge_window", c.thresholds.edge_window},
        {"k_points", c.thresholds.k_points}}},
      {"extension_factor", c.extension_factor},
      {"initial_side", to_string(c.initial_side)},
      {"velocity_quantile", c.velocity_quantile},
      {"trials", c.trials},
      {"seed", c.seed},
      {"threads", c.threads},
      {"out", c.out.string()},
  };
  if (c.ripple_baseline) doc["ripple_baseline"] = {c.ripple_baseline->first, c.ripple_baseline->second};
  if (!c.study.empty()) {
    json study = json::array();
    for (const auto& sp : c.study) {
      study.push_back({{"name", sp.name}, {"vary", std::string(to_string(sp.vary))}, {"endpoints", sp.endpoints}});
    }
    doc["study"] = study;
  }
  return doc;
}

}  // namespace essh::runner
