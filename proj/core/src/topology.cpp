#include "essh/topology.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>

#include "essh/error.hpp"

namespace essh {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// a(k_j) on the uniform grid, evaluated with Horner's rule in e^{ik}.
std::vector<std::complex<double>> curve_values(const HoppingParams& params, std::size_t k_points) {
  const auto t = params.amplitudes();
  std::vector<std::complex<double>> out(k_points);
  for (std::size_t j = 0; j < k_points; ++j) {
    const double k = kTwoPi * static_cast<double>(j) / static_cast<double>(k_points);
    const std::complex<double> z = std::polar(1.0, k);
    std::complex<double> acc = t[4];
    for (int r = 3; r >= 0; --r) acc = acc * z + t[r];
    out[j] = acc;
  }
  return out;
}

std::optional<int> gapped_winding(const QuenchPath& path, double value, const ClassifyOptions& opt) {
  try {
    return winding_number(path.at(value), opt.k_points, opt.gap_tolerance).winding;
  } catch (const GaplessError&) {
    return std::nullopt;
  }
}

// Locates every jump between lo and hi (w(lo) != w(hi)) by bisection.
void bisect_jumps(const QuenchPath& path, double lo, int w_lo, double hi, int w_hi,
                  const ClassifyOptions& opt, std::vector<double>& out) {
  while (std::abs(hi - lo) > opt.resolution) {
    const double mid = 0.5 * (lo + hi);
    const auto w_mid = gapped_winding(path, mid, opt);
    if (!w_mid) {
      out.push_back(mid);
      return;
    }
    if (*w_mid == w_lo) {
      lo = mid;
    } else if (*w_mid == w_hi) {
      hi = mid;
    } else {
      // two transitions inside one bracket
      bisect_jumps(path, lo, w_lo, mid, *w_mid, opt, out);
      bisect_jumps(path, mid, *w_mid, hi, w_hi, opt, out);
      return;
    }
  }
  out.push_back(0.5 * (lo + hi));
}

// Replaces runs of points closer than `window` by their midpoint.
std::vector<double> merge_clusters(const std::vector<double>& points, double window) {
  std::vector<double> out;
  std::size_t i = 0;
  while (i < points.size()) {
    std::size_t j = i;
    while (j + 1 < points.size() && std::abs(points[j + 1] - points[j]) <= window) ++j;
    out.push_back(0.5 * (points[i] + points[j]));
    i = j + 1;
  }
  return out;
}

}  // namespace

WindingResult winding_number(const HoppingParams& params, std::size_t k_points,
                             double gap_tolerance, bool reverse_k) {
  params.validate();
  if (k_points < kMinWindingKPoints) {
    std::ostringstream os;
    os << "winding_number needs at least " << kMinWindingKPoints << " k-points, got " << k_points;
    throw InvalidArgument(os.str());
  }
  const auto a = curve_values(params, k_points);
  double gap = std::numeric_limits<double>::infinity();
  for (const auto& z : a) gap = std::min(gap, std::abs(z));
  if (!(gap > gap_tolerance)) {
    std::ostringstream os;
    os << "d-vector curve is gapless (min |d(k)| = " << gap << ")";
    throw GaplessError(os.str(), gap);
  }

  double total = 0.0;
  for (std::size_t j = 0; j < k_points; ++j) {
    const std::size_t next = (j + 1) % k_points;
    const auto& from = reverse_k ? a[next] : a[j];
    const auto& to = reverse_k ? a[j] : a[next];
    // arg(to / from) lies in (-pi, pi]
    total += std::arg(to * std::conj(from));
  }
  const double turns = total / kTwoPi;
  const int winding = static_cast<int>(std::lround(turns));
  return {winding, gap, k_points, std::abs(turns - winding)};
}

std::vector<BlochVector> sample_d_curve(const HoppingParams& params, std::size_t k_points) {
  params.validate();
  if (k_points < 2) throw InvalidArgument("sample_d_curve needs at least 2 k-points");
  std::vector<BlochVector> out;
  out.reserve(k_points);
  for (std::size_t j = 0; j < k_points; ++j) {
    out.push_back(bloch_d(params, kTwoPi * static_cast<double>(j) / static_cast<double>(k_points)));
  }
  return out;
}

double min_gap(const HoppingParams& params, std::size_t k_points) {
  params.validate();
  if (k_points == 0) throw InvalidArgument("min_gap needs at least one k-point");
  double gap = std::numeric_limits<double>::infinity();
  for (const auto& z : curve_values(params, k_points)) gap = std::min(gap, std::abs(z));
  return gap;
}

QuenchPath::QuenchPath(Hopping varied, double start, double end, std::size_t steps,
                       HoppingParams frozen)
    : varied_(varied), start_(start), end_(end), steps_(steps), frozen_(frozen) {
  if (!std::isfinite(start) || !std::isfinite(end)) throw InvalidArgument("path endpoints must be finite");
  if (start == end) throw InvalidArgument("path start and end must differ");
  if (steps < 2) throw InvalidArgument("path needs at least 2 steps");
  frozen_.validate();
}

std::vector<double> QuenchPath::values() const {
  std::vector<double> out(steps_);
  const double span = end_ - start_;
  for (std::size_t i = 0; i < steps_; ++i) {
    out[i] = start_ + span * static_cast<double>(i) / static_cast<double>(steps_ - 1);
  }
  out.back() = end_;
  return out;
}

PathClassification classify_path(const QuenchPath& path, const ClassifyOptions& opt) {
  if (!(opt.extension_factor > 1.0)) throw InvalidArgument("extension_factor must exceed 1");
  if (opt.path_samples < 2 || opt.extension_samples < 1) {
    throw InvalidArgument("classify_path needs at least 2 path samples and 1 extension sample");
  }

  PathClassification out;
  out.c_i = winding_number(path.at(path.start()), opt.k_points, opt.gap_tolerance).winding;
  out.c_f = winding_number(path.at(path.end()), opt.k_points, opt.gap_tolerance).winding;
  out.c_h = out.c_f;

  const double span = path.end() - path.start();
  const double ext_end = path.start() + opt.extension_factor * span;

  std::vector<double> grid;
  grid.reserve(opt.path_samples + opt.extension_samples);
  for (std::size_t i = 0; i < opt.path_samples; ++i) {
    grid.push_back(path.start() + span * static_cast<double>(i) / static_cast<double>(opt.path_samples - 1));
  }
  grid.back() = path.end();
  const std::size_t end_index = grid.size() - 1;
  for (std::size_t i = 1; i <= opt.extension_samples; ++i) {
    grid.push_back(path.end() + (ext_end - path.end()) * static_cast<double>(i) /
                                    static_cast<double>(opt.extension_samples));
  }

  std::optional<double> prev_value;
  int prev_w = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto w = gapped_winding(path, grid[i], opt);
    if (!w) continue;
    if (prev_value && *w != prev_w) {
      bisect_jumps(path, *prev_value, prev_w, grid[i], *w, opt, out.transition_points);
    }
    if (i > end_index && !out.further_transition_found && *w != out.c_f) {
      out.c_h = *w;
      out.further_transition_found = true;
    }
    prev_value = grid[i];
    prev_w = *w;
  }
  out.transition_points = merge_clusters(out.transition_points, opt.merge_window);
  return out;
}

}  // namespace essh
