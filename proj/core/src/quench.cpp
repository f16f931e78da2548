#include "essh/quench.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "essh/error.hpp"
#include "essh/parallel.hpp"

namespace essh {
namespace {

constexpr Eigen::Index kTimeBlock = 64;

struct LineFit {
  double slope = 0.0;
  std::size_t points = 0;
};

LineFit least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  return {sxx > 0.0 ? sxy / sxx : std::numeric_limits<double>::quiet_NaN(), x.size()};
}

void check_cone(const LightCone& cone, const ChainSpec& spec) {
  if (cone.density.rows() != static_cast<Eigen::Index>(spec.sites())) {
    throw DimensionMismatch("light cone rows do not match chain size");
  }
  if (cone.density.cols() != static_cast<Eigen::Index>(cone.times.size())) {
    throw DimensionMismatch("light cone columns do not match time axis");
  }
}

}  // namespace

void QuenchSetup::validate() const {
  initial_params.validate();
  final_params.validate();
  if (initial_state.size() != static_cast<Eigen::Index>(spec.sites())) {
    throw DimensionMismatch("initial state length does not match chain size");
  }
  if (!(std::abs(initial_state.norm() - 1.0) <= 1e-10)) {
    throw InvalidArgument("initial state must have unit norm");
  }
  if (time_grid.empty() || time_grid.front() != 0.0) throw InvalidArgument("time grid must start at t = 0");
  for (std::size_t i = 1; i < time_grid.size(); ++i) {
    if (!(time_grid[i] > time_grid[i - 1])) throw InvalidArgument("time grid must be strictly ascending");
  }
}

std::vector<double> uniform_time_grid(double t_max, std::size_t points) {
  if (!(t_max > 0.0) || !std::isfinite(t_max)) throw InvalidArgument("t_max must be positive and finite");
  if (points < 2) throw InvalidArgument("time grid needs at least 2 points");
  std::vector<double> t(points);
  for (std::size_t i = 0; i < points; ++i) {
    t[i] = t_max * static_cast<double>(i) / static_cast<double>(points - 1);
  }
  t.back() = t_max;
  return t;
}

Eigen::VectorXd compute_coefficients(const Eigen::VectorXd& initial_state, const EigenSystem& final_es) {
  if (initial_state.size() != final_es.states.rows()) {
    std::ostringstream os;
    os << "initial state has " << initial_state.size() << " components, eigenbasis has "
       << final_es.states.rows();
    throw DimensionMismatch(os.str());
  }
  return final_es.states.transpose() * initial_state;
}

Eigen::VectorXcd evolve_state(const Eigen::VectorXd& coefficients, const EigenSystem& final_es, double t) {
  if (coefficients.size() != final_es.size()) throw DimensionMismatch("coefficient count does not match eigenbasis");
  const Eigen::ArrayXd phase = -t * final_es.energies.array();
  const Eigen::VectorXd re = (coefficients.array() * phase.cos()).matrix();
  const Eigen::VectorXd im = (coefficients.array() * phase.sin()).matrix();
  Eigen::VectorXcd psi(final_es.states.rows());
  psi.real() = final_es.states * re;
  psi.imag() = final_es.states * im;
  return psi;
}

std::vector<double> survival_probability(const Eigen::VectorXd& coefficients, const Eigen::VectorXd& energies,
                                         const std::vector<double>& times) {
  if (coefficients.size() != energies.size()) throw DimensionMismatch("coefficient count does not match spectrum");
  const Eigen::ArrayXd weight = coefficients.array().square();
  std::vector<double> out(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    const Eigen::ArrayXd phase = -times[i] * energies.array();
    const double re = (weight * phase.cos()).sum();
    const double im = (weight * phase.sin()).sum();
    out[i] = re * re + im * im;
  }
  return out;
}

QuenchRecord evolve(const QuenchSetup& setup, const EigenSystem& final_es, unsigned threads) {
  setup.validate();
  const auto sites = static_cast<Eigen::Index>(setup.spec.sites());
  if (final_es.states.rows() != sites || final_es.size() != sites) {
    throw DimensionMismatch("post-quench eigen system does not match chain size");
  }

  QuenchRecord rec;
  rec.setup = setup;
  rec.energies = final_es.energies;
  rec.coefficients = compute_coefficients(setup.initial_state, final_es);

  const auto n_times = static_cast<Eigen::Index>(setup.time_grid.size());
  rec.density.resize(sites, n_times);
  rec.survival.assign(setup.time_grid.size(), 0.0);

  const auto n_blocks = static_cast<std::size_t>((n_times + kTimeBlock - 1) / kTimeBlock);
  detail::parallel_for(n_blocks, threads, [&](std::size_t b) {
    const Eigen::Index first = static_cast<Eigen::Index>(b) * kTimeBlock;
    const Eigen::Index count = std::min(kTimeBlock, n_times - first);
    Eigen::MatrixXd re(sites, count), im(sites, count);
    for (Eigen::Index c = 0; c < count; ++c) {
      const Eigen::ArrayXd phase = -setup.time_grid[static_cast<std::size_t>(first + c)] * final_es.energies.array();
      re.col(c) = (rec.coefficients.array() * phase.cos()).matrix();
      im.col(c) = (rec.coefficients.array() * phase.sin()).matrix();
    }
    const Eigen::MatrixXd psi_re = final_es.states * re;
    const Eigen::MatrixXd psi_im = final_es.states * im;
    rec.density.middleCols(first, count) = psi_re.array().square() + psi_im.array().square();
    const Eigen::RowVectorXd ov_re = setup.initial_state.transpose() * psi_re;
    const Eigen::RowVectorXd ov_im = setup.initial_state.transpose() * psi_im;
    for (Eigen::Index c = 0; c < count; ++c) {
      rec.survival[static_cast<std::size_t>(first + c)] = ov_re(c) * ov_re(c) + ov_im(c) * ov_im(c);
    }
  });
  return rec;
}

std::vector<std::pair<double, double>> survival_trace(const QuenchRecord& record) {
  std::vector<std::pair<double, double>> out;
  out.reserve(record.survival.size());
  for (std::size_t i = 0; i < record.survival.size(); ++i) {
    out.emplace_back(record.setup.time_grid[i], record.survival[i]);
  }
  return out;
}

LightCone light_cone(const QuenchRecord& record) { return {record.setup.time_grid, record.density}; }

double ripple_onset_time(const std::vector<std::pair<double, double>>& trace,
                         std::pair<double, double> baseline_window, const RippleOptions& opt) {
  const auto [w0, w1] = baseline_window;
  if (!(w1 > w0)) throw InvalidArgument("baseline window must have positive length");
  if (trace.size() < 8) throw InvalidArgument("trace too short for ripple detection");

  const double dt = trace[1].first - trace[0].first;
  if (!(dt > 0.0)) throw InvalidArgument("trace times must ascend");
  for (std::size_t i = 1; i < trace.size(); ++i) {
    const double step = trace[i].first - trace[i - 1].first;
    if (std::abs(step - dt) > 1e-6 * dt) throw InvalidArgument("ripple detection needs a uniform time grid");
  }

  std::vector<double> curvature(trace.size(), 0.0);
  for (std::size_t i = 1; i + 1 < trace.size(); ++i) {
    curvature[i] = (trace[i + 1].second - 2.0 * trace[i].second + trace[i - 1].second) / (dt * dt);
  }

  double p_sum = 0.0, p_sq = 0.0, c_sum = 0.0, c_sq = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 1; i + 1 < trace.size(); ++i) {
    const double t = trace[i].first;
    if (t < w0 || t > w1) continue;
    p_sum += trace[i].second;
    p_sq += trace[i].second * trace[i].second;
    c_sum += curvature[i];
    c_sq += curvature[i] * curvature[i];
    ++n;
  }
  if (n < 5) throw InvalidArgument("baseline window holds fewer than 5 trace points");
  const auto nn = static_cast<double>(n);
  const double p_mean = p_sum / nn;
  const double p_std = std::sqrt(std::max(0.0, p_sq / nn - p_mean * p_mean));
  if (p_std > opt.max_plateau_std) {
    std::ostringstream os;
    os << "no plateau in baseline window [" << w0 << ", " << w1 << "]: std " << p_std;
    throw NoPlateau(os.str());
  }
  const double c_mean = c_sum / nn;
  const double c_std = std::max(opt.min_curvature_std, std::sqrt(std::max(0.0, c_sq / nn - c_mean * c_mean)));

  for (std::size_t i = 1; i + 1 < trace.size(); ++i) {
    if (trace[i].first <= w1) continue;
    if (std::abs(curvature[i] - c_mean) > opt.threshold_sigmas * c_std) return trace[i].first;
  }
  return std::numeric_limits<double>::infinity();
}

double estimate_channel_velocity(const LightCone& cone, const ChainSpec& spec, double quantile,
                                 const VelocityOptions& opt) {
  check_cone(cone, spec);
  if (!(quantile > 0.0 && quantile < 1.0)) throw InvalidArgument("quantile must lie in (0, 1)");
  const Eigen::Index sites = cone.density.rows();
  const Eigen::Index n_times = cone.density.cols();

  // beyond(s, t) = probability on sites >= s
  Eigen::MatrixXd beyond(sites, n_times);
  beyond.row(sites - 1) = cone.density.row(sites - 1);
  for (Eigen::Index s = sites - 2; s >= 0; --s) beyond.row(s) = beyond.row(s + 1) + cone.density.row(s);

  const auto window = static_cast<Eigen::Index>(opt.edges.edge_window_sites(spec));
  const Eigen::Index lo = std::max(sites / 4, window);
  const Eigen::Index hi = (3 * sites) / 4;
  if (lo >= hi || window >= sites) throw NoTransport("chain has no bulk outside the edge window");

  // long-time reference: all probability that ever leaves the left edge window
  const double transported = beyond.row(window).maxCoeff();
  if (!(transported >= opt.transport_floor)) {
    throw NoTransport("no probability leaves the edge window");
  }
  const double target = quantile * transported;

  std::vector<double> arrival, position;
  for (Eigen::Index s = lo; s < hi; ++s) {
    for (Eigen::Index t = 0; t < n_times; ++t) {
      if (beyond(s, t) >= target) {
        arrival.push_back(cone.times[static_cast<std::size_t>(t)]);
        position.push_back(static_cast<double>(s));
        break;
      }
    }
  }
  if (arrival.size() < opt.min_fit_points) {
    throw NoTransport("transported probability never reaches the middle of the chain");
  }
  const auto fit = least_squares_slope(arrival, position);
  if (!std::isfinite(fit.slope) || fit.slope <= 0.0) throw NoTransport("arrival front has no positive slope");
  return fit.slope;
}

double estimate_dominant_channel_velocity(const LightCone& cone, const ChainSpec& spec, const VelocityOptions& opt) {
  check_cone(cone, spec);
  const auto cells = static_cast<Eigen::Index>(spec.n_cells);
  const auto n_times = static_cast<Eigen::Index>(cone.times.size());
  const auto wc = static_cast<Eigen::Index>(opt.edges.edge_window_cells(spec));
  if (cells - 2 * wc < 5) throw NoTransport("chain has no bulk outside the edge windows");

  const double t_from = cone.times.back() / 3.0;
  std::vector<double> times, ridge;
  Eigen::VectorXd cell(cells), smooth(cells);
  for (Eigen::Index t = 0; t < n_times; ++t) {
    if (cone.times[static_cast<std::size_t>(t)] < t_from) continue;
    for (Eigen::Index c = 0; c < cells; ++c) cell(c) = cone.density(2 * c, t) + cone.density(2 * c + 1, t);
    if (cell.segment(wc, cells - 2 * wc).sum() < opt.transport_floor) continue;
    for (Eigen::Index c = 0; c < cells; ++c) {
      const Eigen::Index a = std::max<Eigen::Index>(0, c - 2);
      const Eigen::Index b = std::min<Eigen::Index>(cells - 1, c + 2);
      smooth(c) = cell.segment(a, b - a + 1).sum() / 5.0;
    }
    Eigen::Index at = 0;
    smooth.segment(wc, cells - 2 * wc).maxCoeff(&at);
    times.push_back(cone.times[static_cast<std::size_t>(t)]);
    ridge.push_back(2.0 * static_cast<double>(wc + at));
  }
  if (times.size() < opt.min_fit_points) throw NoTransport("bulk density never exceeds the transport floor");
  const auto fit = least_squares_slope(times, ridge);
  if (!std::isfinite(fit.slope) || fit.slope <= 0.0) throw NoTransport("dominant channel does not propagate");
  return fit.slope;
}

}  // namespace essh
