#include "essh/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "essh/error.hpp"
#include "essh/parallel.hpp"

namespace essh {
namespace {

constexpr double kWeightTieTolerance = 1e-6;

Eigen::VectorXd window_mask(Eigen::Index sites, std::size_t window, EdgeSide side) {
  Eigen::VectorXd mask = Eigen::VectorXd::Zero(sites);
  const auto w = std::min<Eigen::Index>(static_cast<Eigen::Index>(window), sites);
  if (side != EdgeSide::right) mask.head(w).setOnes();
  if (side != EdgeSide::left) mask.tail(w).setOnes();
  return mask;
}

double participation_length(const Eigen::VectorXd& state) {
  const double norm2 = state.squaredNorm();
  const double ipr = state.array().square().square().sum() / (norm2 * norm2);
  return 1.0 / ipr;
}

}  // namespace

const char* to_string(EdgeSide side) noexcept {
  switch (side) {
    case EdgeSide::left: return "left";
    case EdgeSide::right: return "right";
    case EdgeSide::both: return "both";
  }
  return "?";
}

void canonicalize_signs(Eigen::MatrixXd& states, double threshold) {
  for (Eigen::Index j = 0; j < states.cols(); ++j) {
    for (Eigen::Index i = 0; i < states.rows(); ++i) {
      const double c = states(i, j);
      if (std::abs(c) > threshold) {
        if (c < 0.0) states.col(j) *= -1.0;
        break;
      }
    }
  }
}

EigenSystem diagonalize(const Eigen::MatrixXd& symmetric) {
  if (symmetric.rows() != symmetric.cols()) throw DimensionMismatch("diagonalize needs a square matrix");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(symmetric, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    std::ostringstream os;
    os << "eigensolver failed to converge on a " << symmetric.rows() << "x" << symmetric.cols()
       << " matrix";
    throw ConvergenceFailure(os.str());
  }
  EigenSystem es{solver.eigenvalues(), solver.eigenvectors()};
  canonicalize_signs(es.states);
  return es;
}

EigenSystem diagonalize(const ChainHamiltonian& h) { return diagonalize(h.matrix()); }

std::size_t EdgeCriteria::edge_window_cells(const ChainSpec& spec) const noexcept {
  const auto by_fraction =
      static_cast<std::size_t>(std::ceil(edge_cell_fraction * static_cast<double>(spec.n_cells)));
  const std::size_t cells = std::max(min_edge_cells, by_fraction);
  return std::max<std::size_t>(1, std::min(cells, spec.n_cells / 2));
}

std::vector<Eigen::Index> EdgeStateSet::indices() const {
  std::vector<Eigen::Index> out;
  out.reserve(states.size());
  for (const auto& s : states) out.push_back(s.index);
  return out;
}

double left_window_weight(const Eigen::VectorXd& state, std::size_t window_sites) {
  const auto w = std::min<Eigen::Index>(static_cast<Eigen::Index>(window_sites), state.size());
  return state.head(w).squaredNorm();
}

double right_window_weight(const Eigen::VectorXd& state, std::size_t window_sites) {
  const auto w = std::min<Eigen::Index>(static_cast<Eigen::Index>(window_sites), state.size());
  return state.tail(w).squaredNorm();
}

EdgeStateSet find_edge_states(const EigenSystem& es, const ChainSpec& spec,
                              const EdgeCriteria& criteria) {
  if (es.states.rows() != static_cast<Eigen::Index>(spec.sites())) {
    throw DimensionMismatch("eigen system does not match chain size");
  }
  const std::size_t window = criteria.edge_window_sites(spec);
  EdgeStateSet out;
  for (Eigen::Index j = 0; j < es.size(); ++j) {
    const double e = es.energies(j);
    if (!(std::abs(e) < criteria.zero_energy_threshold)) continue;
    const Eigen::VectorXd psi = es.states.col(j);
    const double left = left_window_weight(psi, window);
    const double right = right_window_weight(psi, window);
    // windows overlap only on chains shorter than two windows
    const double weight = std::min(1.0, left + right);
    if (!(weight > criteria.edge_weight_threshold)) continue;
    EdgeSide side = EdgeSide::both;
    if (left > 2.0 * right) side = EdgeSide::left;
    else if (right > 2.0 * left) side = EdgeSide::right;
    out.states.push_back({j, e, side, weight, psi.array().square().square().sum()});
  }
  return out;
}

Eigen::VectorXd prepare_initial_edge_state(const EigenSystem& es, const ChainSpec& spec,
                                           EdgeSide side, const EdgeCriteria& criteria) {
  if (side == EdgeSide::both) throw InvalidArgument("initial edge state needs side left or right");
  const auto sites = static_cast<Eigen::Index>(spec.sites());
  if (es.states.rows() != sites) throw DimensionMismatch("eigen system does not match chain size");

  std::vector<Eigen::Index> zero_modes;
  for (Eigen::Index j = 0; j < es.size(); ++j) {
    if (std::abs(es.energies(j)) < criteria.zero_energy_threshold) zero_modes.push_back(j);
  }
  if (zero_modes.empty()) throw NoEdgeState("no eigenstate below the zero-energy threshold");

  const auto k = static_cast<Eigen::Index>(zero_modes.size());
  Eigen::MatrixXd subspace(sites, k);
  for (Eigen::Index c = 0; c < k; ++c) subspace.col(c) = es.states.col(zero_modes[c]);

  const Eigen::VectorXd mask = window_mask(sites, criteria.edge_window_sites(spec), side);
  const Eigen::MatrixXd window_op = subspace.transpose() * mask.asDiagonal() * subspace;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> window_eig(window_op);
  if (window_eig.info() != Eigen::Success) throw ConvergenceFailure("edge-window eigenproblem failed");

  const Eigen::VectorXd& weights = window_eig.eigenvalues();
  const double best = weights(k - 1);
  if (!(best > criteria.edge_weight_threshold)) {
    std::ostringstream os;
    os << "no " << to_string(side) << " edge state: best window weight " << best;
    throw NoEdgeState(os.str());
  }

  Eigen::Index tied = 0;
  while (tied < k && weights(k - 1 - tied) >= best - kWeightTieTolerance) ++tied;
  Eigen::MatrixXd candidates = subspace * window_eig.eigenvectors().rightCols(tied);

  if (tied > 1) {
    Eigen::VectorXd cell(sites);
    for (Eigen::Index s = 0; s < sites; ++s) cell(s) = static_cast<double>(ChainSpec::cell_of(s));
    const Eigen::MatrixXd position = candidates.transpose() * cell.asDiagonal() * candidates;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> pos_eig(position);
    if (pos_eig.info() != Eigen::Success) throw ConvergenceFailure("position eigenproblem failed");
    candidates = candidates * pos_eig.eigenvectors();
  }

  Eigen::Index pick = 0;
  double widest = -1.0;
  for (Eigen::Index c = 0; c < candidates.cols(); ++c) {
    const double pl = participation_length(candidates.col(c));
    if (pl > widest * (1.0 + 1e-9)) {
      widest = pl;
      pick = c;
    }
  }
  Eigen::MatrixXd chosen = candidates.col(pick).normalized();
  canonicalize_signs(chosen);
  return chosen.col(0);
}

LocalizationMetrics localization_metrics(const Eigen::VectorXd& state, const ChainSpec& spec,
                                         const EdgeCriteria& criteria) {
  if (state.size() != static_cast<Eigen::Index>(spec.sites())) {
    throw DimensionMismatch("state length does not match chain size");
  }
  const double norm = state.norm();
  if (!(std::abs(norm - 1.0) <= 1e-8)) {
    std::ostringstream os;
    os << "state is not normalized (norm " << norm << ")";
    throw InvalidArgument(os.str());
  }
  const std::size_t window = criteria.edge_window_sites(spec);
  const double ipr = state.array().square().square().sum();
  const double edge = std::min(1.0, left_window_weight(state, window) + right_window_weight(state, window));
  return {ipr, edge, 1.0 / ipr};
}

BandSweep band_sweep(const QuenchPath& path, const ChainSpec& spec, unsigned threads) {
  BandSweep out{path, path.values(), {}};
  out.spectra.resize(out.parameter_values.size());
  detail::parallel_for(out.parameter_values.size(), threads, [&](std::size_t i) {
    const double value = out.parameter_values[i];
    const auto h = build_hamiltonian(spec, path.at(value));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h.matrix(), Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
      std::ostringstream os;
      os << "band sweep: eigensolver failed at " << to_string(path.varied()) << " = " << value;
      throw ConvergenceFailure(os.str());
    }
    out.spectra[i] = solver.eigenvalues();
  });
  return out;
}

Eigen::VectorXd central_energies(const Eigen::VectorXd& sorted, Eigen::Index count) {
  if (count < 0 || count > sorted.size()) throw InvalidArgument("central_energies: bad count");
  const Eigen::Index first = (sorted.size() - count) / 2;
  return sorted.segment(first, count);
}

}  // namespace essh
