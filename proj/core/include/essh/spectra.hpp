#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "essh/model.hpp"
#include "essh/topology.hpp"

namespace essh {

/// Ascending energies with orthonormal eigenvectors; column j of `states`
/// belongs to energies(j). Each column's first component with magnitude above
/// 1e-12 is positive.
struct EigenSystem {
  Eigen::VectorXd energies;
  Eigen::MatrixXd states;

  Eigen::Index size() const noexcept { return energies.size(); }
};

/// Dense real-symmetric diagonalization. Throws ConvergenceFailure when the
/// solver reports non-convergence.
EigenSystem diagonalize(const ChainHamiltonian& h);
EigenSystem diagonalize(const Eigen::MatrixXd& symmetric);

/// Flips every column so its first significant component is positive.
void canonicalize_signs(Eigen::MatrixXd& states, double threshold = 1e-12);

/// Thresholds separating edge modes from bulk states.
struct EdgeCriteria {
  double zero_energy_threshold = 1e-3;
  std::size_t min_edge_cells = 20;
  double edge_cell_fraction = 0.05;
  double edge_weight_threshold = 0.5;

  /// max(min_edge_cells, edge_cell_fraction * N), capped at N / 2.
  std::size_t edge_window_cells(const ChainSpec& spec) const noexcept;
  std::size_t edge_window_sites(const ChainSpec& spec) const noexcept {
    return 2 * edge_window_cells(spec);
  }
};

enum class EdgeSide { left, right, both };

const char* to_string(EdgeSide side) noexcept;

struct EdgeState {
  Eigen::Index index = 0;
  double energy = 0.0;
  EdgeSide side = EdgeSide::both;
  double edge_weight = 0.0;  // probability inside the two edge windows
  double ipr = 0.0;
};

struct EdgeStateSet {
  std::vector<EdgeState> states;

  std::size_t size() const noexcept { return states.size(); }
  bool empty() const noexcept { return states.empty(); }
  std::vector<Eigen::Index> indices() const;
};

/// Eigenstates with |E| below the zero-energy threshold whose probability in
/// the first plus last edge window exceeds the weight threshold.
EdgeStateSet find_edge_states(const EigenSystem& es, const ChainSpec& spec,
                              const EdgeCriteria& criteria = {});

/// Unit vector in the near-zero-energy subspace with maximal probability in
/// the chosen edge window.
///
/// The window projector is diagonalized inside the subspace spanned by all
/// eigenstates with |E| below the threshold, so the result does not depend on
/// how a degenerate solver basis happens to be rotated. Candidates whose
/// window weight ties the maximum (within 1e-6) are resolved by diagonalizing
/// cell position inside the tied subspace and keeping the most extended
/// candidate (largest participation length); this discards single decoupled
/// end sites that carry no chain dynamics. Only `left` and `right` are valid
/// sides. Throws NoEdgeState when no candidate clears the weight threshold.
Eigen::VectorXd prepare_initial_edge_state(const EigenSystem& es, const ChainSpec& spec,
                                           EdgeSide side, const EdgeCriteria& criteria = {});

struct LocalizationMetrics {
  double ipr = 0.0;
  double edge_weight = 0.0;
  double participation_length = 0.0;
};

/// IPR = sum_s p_s^2, participation length 1/IPR and the probability inside
/// both edge windows. Rejects states with | ||psi|| - 1 | > 1e-8.
LocalizationMetrics localization_metrics(const Eigen::VectorXd& state, const ChainSpec& spec,
                                         const EdgeCriteria& criteria = {});

/// Window weights of one state.
double left_window_weight(const Eigen::VectorXd& state, std::size_t window_sites);
double right_window_weight(const Eigen::VectorXd& state, std::size_t window_sites);

struct BandSweep {
  QuenchPath path;
  std::vector<double> parameter_values;
  std::vector<Eigen::VectorXd> spectra;  // sorted energies per parameter value
};

/// Full spectrum along the path's sample values. Independent samples are
/// spread over `threads` workers; a diagonalization failure is rethrown as
/// ConvergenceFailure naming the offending parameter value.
BandSweep band_sweep(const QuenchPath& path, const ChainSpec& spec, unsigned threads = 1);

/// The `count` energies closest to the middle of a sorted 2N spectrum.
Eigen::VectorXd central_energies(const Eigen::VectorXd& sorted, Eigen::Index count);

}  // namespace essh
