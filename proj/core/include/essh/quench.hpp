#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "essh/model.hpp"
#include "essh/spectra.hpp"

namespace essh {

/// Sudden quench initial_params -> final_params applied to `initial_state`.
struct QuenchSetup {
  HoppingParams initial_params;
  HoppingParams final_params;
  ChainSpec spec;
  Eigen::VectorXd initial_state;
  std::vector<double> time_grid;

  /// Unit-norm state (1e-10), matching dimension, ascending grid from t = 0.
  void validate() const;
};

/// n points uniformly spaced on [0, t_max].
std::vector<double> uniform_time_grid(double t_max, std::size_t points);

struct QuenchRecord {
  QuenchSetup setup;
  Eigen::VectorXd energies;      // post-quench spectrum
  Eigen::VectorXd coefficients;  // a_f = <psi_f | psi_0>
  std::vector<double> survival;  // |<psi_0|psi(t)>|^2 per time point
  Eigen::MatrixXd density;       // sites x times, |psi_s(t)|^2
};

/// a_f = <psi_f(final)|psi_0> for every post-quench eigenstate.
Eigen::VectorXd compute_coefficients(const Eigen::VectorXd& initial_state, const EigenSystem& final_es);

/// |psi(t)> = sum_f exp(-i E_f t) a_f |psi_f>.
Eigen::VectorXcd evolve_state(const Eigen::VectorXd& coefficients, const EigenSystem& final_es, double t);

/// Survival straight from the spectral sum |sum_f a_f^2 exp(-i E_f t)|^2.
std::vector<double> survival_probability(const Eigen::VectorXd& coefficients,
                                         const Eigen::VectorXd& energies,
                                         const std::vector<double>& times);

/// Full eigenbasis evolution on the setup's time grid. Time points are split
/// into blocks evaluated on up to `threads` workers; each block writes only
/// its own columns. Survival is taken from the overlap of the evolved state
/// with the initial one.
QuenchRecord evolve(const QuenchSetup& setup, const EigenSystem& final_es, unsigned threads = 1);

std::vector<std::pair<double, double>> survival_trace(const QuenchRecord& record);

struct LightCone {
  std::vector<double> times;
  Eigen::MatrixXd density;  // sites x times
};

LightCone light_cone(const QuenchRecord& record);

struct RippleOptions {
  double threshold_sigmas = 5.0;
  /// Raw-P standard deviation above which the baseline is not a plateau.
  double max_plateau_std = 0.05;
  /// Floor on the curvature spread so an exactly flat trace stays quiet.
  double min_curvature_std = 1e-9;
};

/// First time after the baseline window at which the trace's discrete
/// curvature d2P/dt2 leaves the baseline by more than threshold_sigmas
/// standard deviations. Reflection ripples are fast oscillations riding on a
/// slowly decaying plateau, so the test runs on curvature rather than on P.
/// Returns +infinity when no ripple appears. Requires a uniform grid; throws
/// NoPlateau when P itself fluctuates too much inside the baseline window.
double ripple_onset_time(const std::vector<std::pair<double, double>>& trace,
                         std::pair<double, double> baseline_window,
                         const RippleOptions& options = {});

struct VelocityOptions {
  EdgeCriteria edges;
  /// Bulk probability a site (or time slice) must carry to count as transport.
  double transport_floor = 1e-4;
  std::size_t min_fit_points = 10;
};

/// Median-arrival velocity in sites per unit time. The reference mass is the
/// largest probability ever found beyond the left edge window. For every site
/// s in the middle half of the chain, the first time the probability at or
/// beyond s reaches `quantile` of that mass is recorded, and s is fitted
/// linearly against those times. Throws NoTransport when the transported mass
/// is below the floor or too few sites are reached.
double estimate_channel_velocity(const LightCone& cone, const ChainSpec& spec, double quantile,
                                 const VelocityOptions& options = {});

/// Velocity of the most intense channel, in sites per unit time. The per-cell
/// density (smoothed over five cells) is maximized outside both edge windows
/// at each time in the last two thirds of the grid, and the ridge position is
/// fitted linearly in time.
double estimate_dominant_channel_velocity(const LightCone& cone, const ChainSpec& spec,
                                          const VelocityOptions& options = {});

}  // namespace essh
