#include <cmath>
#include <limits>
#include <optional>

#include "essh/essh.hpp"
#include "essh/parallel.hpp"
#include "essh/runner/csv.hpp"
#include "essh/runner/run.hpp"

namespace essh::runner {

ExperimentOutput run_property_check(const ExperimentConfig& config);

namespace {

std::string d_curve_csv(const HoppingParams& p, std::size_t k_points) {
  CsvBuilder csv({"k", "d_x", "d_y"});
  for (const auto& d : sample_d_curve(p, k_points)) csv.row(std::vector<double>{d.k, d.dx, d.dy});
  return csv.text();
}

ClassifyOptions classify_options(const ExperimentConfig& c) {
  ClassifyOptions opt;
  opt.extension_factor = c.extension_factor;
  opt.k_points = c.thresholds.k_points;
  opt.gap_tolerance = c.thresholds.gap_tolerance;
  return opt;
}

std::string classification_csv(const PathClassification& pc) {
  std::string points;
  for (std::size_t i = 0; i < pc.transition_points.size(); ++i) {
    if (i) points += ';';
    points += format_double(pc.transition_points[i]);
  }
  CsvBuilder csv({"c_i", "c_f", "c_h", "transition_points", "further_transition_found"});
  csv.row(std::vector<std::string>{std::to_string(pc.c_i), std::to_string(pc.c_f), std::to_string(pc.c_h), points,
                                   pc.further_transition_found ? "true" : "false"});
  return csv.text();
}

std::string bands_csv(const BandSweep& sweep) {
  std::vector<std::string> header{"parameter_value"};
  const auto dim = sweep.spectra.empty() ? 0 : sweep.spectra.front().size();
  for (Eigen::Index j = 0; j < dim; ++j) header.push_back("E_" + std::to_string(j + 1));
  CsvBuilder csv(header);
  for (std::size_t i = 0; i < sweep.parameter_values.size(); ++i) {
    std::vector<double> row{sweep.parameter_values[i]};
    for (Eigen::Index j = 0; j < dim; ++j) row.push_back(sweep.spectra[i](j));
    csv.row(row);
  }
  return csv.text();
}

std::string survival_csv(const QuenchRecord& r) {
  CsvBuilder csv({"t", "P"});
  for (const auto& [t, p] : survival_trace(r)) csv.row(std::vector<double>{t, p});
  return csv.text();
}

std::string coefficients_csv(const QuenchRecord& r) {
  CsvBuilder csv({"f", "E_f", "a_f"});
  for (Eigen::Index f = 0; f < r.coefficients.size(); ++f) {
    csv.row(std::vector<std::string>{std::to_string(f), format_double(r.energies(f)),
                                     format_double(r.coefficients(f))});
  }
  return csv.text();
}

std::string profile_csv(const Eigen::VectorXd& state) {
  CsvBuilder csv({"site_index", "amplitude", "probability"});
  for (Eigen::Index s = 0; s < state.size(); ++s) {
    csv.row(std::vector<std::string>{std::to_string(s), format_double(state(s)), format_double(state(s) * state(s))});
  }
  return csv.text();
}

std::string edge_states_csv(const EdgeStateSet& set) {
  CsvBuilder csv({"index", "energy", "side", "edge_weight", "ipr"});
  for (const auto& e : set.states) {
    csv.row(std::vector<std::string>{std::to_string(e.index), format_double(e.energy), to_string(e.side),
                                     format_double(e.edge_weight), format_double(e.ipr)});
  }
  return csv.text();
}

std::string lightcone_csv(const LightCone& cone) {
  CsvBuilder csv;
  csv.row(cone.times);
  std::vector<double> row(static_cast<std::size_t>(cone.density.cols()));
  for (Eigen::Index s = 0; s < cone.density.rows(); ++s) {
    for (Eigen::Index t = 0; t < cone.density.cols(); ++t) row[static_cast<std::size_t>(t)] = cone.density(s, t);
    csv.row(row);
  }
  return csv.text();
}

// Quantity table: name,value,status. A missing value keeps its error text.
struct QuantityTable {
  CsvBuilder csv{{"quantity", "value", "status"}};

  void add(const std::string& name, double value) {
    csv.row(std::vector<std::string>{name, format_double(value), "ok"});
  }
  void missing(const std::string& name, const std::string& why) {
    csv.row(std::vector<std::string>{name, "", why});
  }
};

void add_metrics(QuantityTable& table, const std::string& prefix, const LocalizationMetrics& m) {
  table.add(prefix + "ipr", m.ipr);
  table.add(prefix + "edge_weight", m.edge_weight);
  table.add(prefix + "participation_length", m.participation_length);
}

double plateau_mean(const QuenchRecord& r) {
  const auto& t = r.setup.time_grid;
  const double half = 0.5 * t.back();
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] >= half) {
      sum += r.survival[i];
      ++n;
    }
  }
  return sum / static_cast<double>(n);
}

// Quantity that may legitimately be unavailable (no plateau, no transport).
struct Measured {
  std::optional<double> value;
  std::string error;
};

template <class Fn>
Measured measure(Fn&& fn) {
  try {
    return {fn(), {}};
  } catch (const NumericalError& e) {
    return {std::nullopt, e.what()};
  }
}

void add_measured(QuantityTable& table, const std::string& name, const Measured& m) {
  if (m.value) {
    table.add(name, *m.value);
  } else {
    table.missing(name, m.error);
  }
}

struct PreparedState {
  EigenSystem initial_es;
  EdgeStateSet edges;
  Eigen::VectorXd state;
};

PreparedState prepare_state(const ExperimentConfig& c, const HoppingParams& initial) {
  const ChainSpec spec{c.n_cells};
  PreparedState out;
  out.initial_es = diagonalize(build_hamiltonian(spec, initial));
  out.edges = find_edge_states(out.initial_es, spec, c.edge_criteria());
  out.state = prepare_initial_edge_state(out.initial_es, spec, c.initial_side, c.edge_criteria());
  return out;
}

QuenchRecord quench_from(const ExperimentConfig& c, const HoppingParams& initial, const HoppingParams& final_params,
                         const Eigen::VectorXd& state, unsigned threads) {
  const ChainSpec spec{c.n_cells};
  const auto final_es = diagonalize(build_hamiltonian(spec, final_params));
  QuenchSetup setup{initial, final_params, spec, state, uniform_time_grid(c.time.t_max, c.time.t_points)};
  return evolve(setup, final_es, threads);
}

VelocityOptions velocity_options(const ExperimentConfig& c) {
  VelocityOptions v;
  v.edges = c.edge_criteria();
  return v;
}

ExperimentOutput winding_diagram(const ExperimentConfig& c) {
  const auto w = winding_number(c.params, c.thresholds.k_points, c.thresholds.gap_tolerance);
  return {{{"d_curve.csv", d_curve_csv(c.params, c.thresholds.k_points)},
           {"winding.txt", "winding=" + std::to_string(w.winding) + "\n"}},
          {}};
}

ExperimentOutput classify(const ExperimentConfig& c) {
  const QuenchPath path(c.path.vary, c.path.from, c.path.to, c.path.steps, c.params);
  return {{{"classification.csv", classification_csv(classify_path(path, classify_options(c)))}}, {}};
}

ExperimentOutput bands(const ExperimentConfig& c) {
  const QuenchPath path(c.path.vary, c.path.from, c.path.to, c.path.steps, c.params);
  return {{{"bands.csv", bands_csv(band_sweep(path, ChainSpec{c.n_cells}, c.threads))}}, {}};
}

ExperimentOutput quench(const ExperimentConfig& c) {
  const ChainSpec spec{c.n_cells};
  const auto prepared = prepare_state(c, c.initial_params());
  const auto record = quench_from(c, c.initial_params(), c.final_params(), prepared.state, c.threads);

  QuantityTable table;
  add_metrics(table, "initial_", localization_metrics(prepared.state, spec, c.edge_criteria()));
  table.add("plateau", plateau_mean(record));
  if (c.ripple_baseline) {
    add_measured(table, "ripple_onset",
                 measure([&] { return ripple_onset_time(survival_trace(record), *c.ripple_baseline); }));
  }
  return {{{"survival.csv", survival_csv(record)},
           {"coefficients.csv", coefficients_csv(record)},
           {"profile.csv", profile_csv(prepared.state)},
           {"edge_states.csv", edge_states_csv(prepared.edges)},
           {"metrics.csv", table.csv.text()}},
          {}};
}

ExperimentOutput lightcone(const ExperimentConfig& c) {
  const ChainSpec spec{c.n_cells};
  const auto prepared = prepare_state(c, c.initial_params());
  const auto record = quench_from(c, c.initial_params(), c.final_params(), prepared.state, c.threads);
  const auto cone = light_cone(record);

  QuantityTable table;
  add_measured(table, "channel_velocity", measure([&] {
                 return estimate_channel_velocity(cone, spec, c.velocity_quantile, velocity_options(c));
               }));
  add_measured(table, "dominant_channel_velocity",
               measure([&] { return estimate_dominant_channel_velocity(cone, spec, velocity_options(c)); }));
  return {{{"lightcone.csv", lightcone_csv(cone)}, {"velocity.csv", table.csv.text()}}, {}};
}

struct EndpointResult {
  std::vector<Artifact> artifacts;
  std::vector<std::string> summary;
  std::optional<std::string> failure;
};

std::string endpoint_dir(const StudyPath& sp, double endpoint) {
  return sp.name + "/" + std::string(to_string(sp.vary)) + "_" + format_double(endpoint);
}

EndpointResult study_endpoint(const ExperimentConfig& c, const PreparedState& prepared, const StudyPath& sp,
                              double endpoint) {
  const ChainSpec spec{c.n_cells};
  const std::string dir = endpoint_dir(sp, endpoint);
  EndpointResult out;
  std::vector<std::string> fields{sp.name, std::string(to_string(sp.vary)), format_double(endpoint)};
  const auto fail = [&](const std::exception& e) {
    out.failure = e.what();
    fields.resize(3);
    fields.insert(fields.end(), {"", "", "", "", "", "", "", "failed"});
    out.summary = fields;
  };

  try {
    const QuenchPath path(sp.vary, c.params[sp.vary], endpoint, c.path.steps, c.params);
    const auto pc = classify_path(path, classify_options(c));
    out.artifacts.push_back({dir + "/classification.csv", classification_csv(pc)});
    out.artifacts.push_back({dir + "/bands.csv", bands_csv(band_sweep(path, spec, 1))});

    const auto final_params = c.params.with(sp.vary, endpoint);
    const auto final_es = diagonalize(build_hamiltonian(spec, final_params));
    out.artifacts.push_back({dir + "/edge_states.csv",
                             edge_states_csv(find_edge_states(final_es, spec, c.edge_criteria()))});
    QuenchSetup setup{c.params, final_params, spec, prepared.state,
                      uniform_time_grid(c.time.t_max, c.time.t_points)};
    const auto record = evolve(setup, final_es, 1);
    const auto cone = light_cone(record);
    out.artifacts.push_back({dir + "/survival.csv", survival_csv(record)});
    out.artifacts.push_back({dir + "/coefficients.csv", coefficients_csv(record)});
    out.artifacts.push_back({dir + "/lightcone.csv", lightcone_csv(cone)});

    const double plateau = plateau_mean(record);
    Measured ripple{std::nullopt, "no ripple_baseline configured"};
    if (c.ripple_baseline) {
      ripple = measure([&] { return ripple_onset_time(survival_trace(record), *c.ripple_baseline); });
    }
    const auto channel =
        measure([&] { return estimate_channel_velocity(cone, spec, c.velocity_quantile, velocity_options(c)); });
    const auto dominant = measure([&] { return estimate_dominant_channel_velocity(cone, spec, velocity_options(c)); });

    QuantityTable table;
    add_metrics(table, "initial_", localization_metrics(prepared.state, spec, c.edge_criteria()));
    Eigen::VectorXd last = record.density.col(record.density.cols() - 1).cwiseSqrt();
    const auto final_metrics = localization_metrics(last, spec, c.edge_criteria());
    table.add("final_edge_weight", final_metrics.edge_weight);
    table.add("final_ipr", final_metrics.ipr);
    table.add("plateau", plateau);
    if (c.ripple_baseline) add_measured(table, "ripple_onset", ripple);
    add_measured(table, "channel_velocity", channel);
    add_measured(table, "dominant_channel_velocity", dominant);
    out.artifacts.push_back({dir + "/metrics.csv", table.csv.text()});

    const auto opt = [](const Measured& m) { return m.value ? format_double(*m.value) : std::string(); };
    fields.insert(fields.end(), {std::to_string(pc.c_i), std::to_string(pc.c_f), std::to_string(pc.c_h),
                                 format_double(plateau), opt(ripple), opt(channel), opt(dominant), "ok"});
    out.summary = fields;
  } catch (const Error& e) {
    fail(e);
  }
  return out;
}

ExperimentOutput path_study(const ExperimentConfig& c) {
  const auto prepared = prepare_state(c, c.params);

  struct Task {
    const StudyPath* path;
    double endpoint;
  };
  std::vector<Task> tasks;
  for (const auto& sp : c.study) {
    for (double e : sp.endpoints) tasks.push_back({&sp, e});
  }
  std::vector<EndpointResult> results(tasks.size());
  detail::parallel_for(tasks.size(), c.threads, [&](std::size_t i) {
    results[i] = study_endpoint(c, prepared, *tasks[i].path, tasks[i].endpoint);
  });

  ExperimentOutput out;
  out.artifacts.push_back({"initial_profile.csv", profile_csv(prepared.state)});
  out.artifacts.push_back({"initial_edge_states.csv", edge_states_csv(prepared.edges)});
  CsvBuilder summary({"path", "vary", "endpoint", "c_i", "c_f", "c_h", "plateau", "ripple_onset", "channel_velocity",
                      "dominant_channel_velocity", "status"});
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    auto& r = results[i];
    for (auto& a : r.artifacts) out.artifacts.push_back(std::move(a));
    summary.row(r.summary);
    if (r.failure) out.failures.push_back({endpoint_dir(*tasks[i].path, tasks[i].endpoint), *r.failure});
  }
  out.artifacts.push_back({"summary.csv", summary.text()});
  return out;
}

}  // namespace

ExperimentOutput run_experiment(const ExperimentConfig& c) {
  switch (c.kind) {
    case ExperimentKind::winding_diagram: return winding_diagram(c);
    case ExperimentKind::classify_path: return classify(c);
    case ExperimentKind::band_sweep: return bands(c);
    case ExperimentKind::quench: return quench(c);
    case ExperimentKind::lightcone: return lightcone(c);
    case ExperimentKind::path_study: return path_study(c);
    case ExperimentKind::property_check: return run_property_check(c);
  }
  throw InvalidArgument("unknown experiment kind");
}

}  // namespace essh::runner
