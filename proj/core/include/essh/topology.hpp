#pragma once

#include <cstddef>
#include <vector>

#include "essh/model.hpp"

namespace essh {

/// Absolute |d(k)| below which the curve counts as touching the origin.
inline constexpr double kGapTolerance = 1e-8;
inline constexpr std::size_t kDefaultKPoints = 4096;
inline constexpr std::size_t kMinWindingKPoints = 64;

struct WindingResult {
  int winding = 0;
  double min_gap = 0.0;        // min_k |d(k)| on the grid
  std::size_t k_points = 0;
  double residual = 0.0;       // |sum(dtheta) / 2pi - winding|
};

/// Winding of the d-vector curve around the origin as k runs over [0, 2pi).
///
/// The angle increments between consecutive grid points are each mapped into
/// (-pi, pi] and summed. Reversed orientation (`reverse_k`) walks the grid in
/// decreasing k and yields the negated winding. Throws GaplessError when the
/// curve comes within `gap_tolerance` of the origin and InvalidArgument when
/// k_points < 64.
WindingResult winding_number(const HoppingParams& params,
                             std::size_t k_points = kDefaultKPoints,
                             double gap_tolerance = kGapTolerance,
                             bool reverse_k = false);

/// d(k_j) for k_j = 2 pi j / k_points, j = 0..k_points-1.
std::vector<BlochVector> sample_d_curve(const HoppingParams& params, std::size_t k_points);

/// min_k |d(k)| over the uniform grid.
double min_gap(const HoppingParams& params, std::size_t k_points = kDefaultKPoints);

/// One-parameter family of Hamiltonians: `varied` runs start -> end over
/// `steps` uniform samples, the other four channels take their values from
/// `frozen`.
class QuenchPath {
 public:
  QuenchPath(Hopping varied, double start, double end, std::size_t steps, HoppingParams frozen);

  Hopping varied() const noexcept { return varied_; }
  double start() const noexcept { return start_; }
  double end() const noexcept { return end_; }
  std::size_t steps() const noexcept { return steps_; }
  const HoppingParams& frozen() const noexcept { return frozen_; }

  HoppingParams at(double value) const noexcept { return frozen_.with(varied_, value); }
  std::vector<double> values() const;
  /// Same frozen values and step count, new end point.
  QuenchPath extended_to(double new_end) const { return {varied_, start_, new_end, steps_, frozen_}; }

 private:
  Hopping varied_;
  double start_;
  double end_;
  std::size_t steps_;
  HoppingParams frozen_;
};

struct PathClassification {
  int c_i = 0;
  int c_f = 0;
  int c_h = 0;
  /// False when the winding never changed inside the extension window; c_h
  /// then equals c_f.
  bool further_transition_found = false;
  /// Gap-closing parameter values in path order, over [start, extension end].
  std::vector<double> transition_points;
};

struct ClassifyOptions {
  double extension_factor = 3.0;  // extension window ends at start + factor * (end - start)
  std::size_t k_points = kDefaultKPoints;
  std::size_t extension_samples = 200;
  std::size_t path_samples = 200;  // scan density on [start, end]
  double resolution = 1e-7;        // bisection stops below this parameter width
  double gap_tolerance = kGapTolerance;
  /// Transitions closer than this are reported as one gap closing. A closing
  /// at several momenta at once can split into sub-resolution jumps on a
  /// finite k grid.
  double merge_window = 1e-5;
};

/// C_i-C_f-C_h label of a path plus its transition points. Throws GaplessError
/// if the start or end of the path sits on a transition.
PathClassification classify_path(const QuenchPath& path, const ClassifyOptions& options = {});

}  // namespace essh
