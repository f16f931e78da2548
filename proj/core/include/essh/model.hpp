#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace essh {

/// The five chiral hopping channels. The enumerator value is the hopping
/// range in unit cells: channel r connects |m+r, A> with |m, B>.
enum class Hopping : int { v = 0, w = 1, nu = 2, mu = 3, gamma = 4 };

inline constexpr std::array<Hopping, 5> kAllHoppings = {
    Hopping::v, Hopping::w, Hopping::nu, Hopping::mu, Hopping::gamma};

constexpr int range_of(Hopping h) noexcept { return static_cast<int>(h); }

std::string_view to_string(Hopping h) noexcept;
std::optional<Hopping> parse_hopping(std::string_view name) noexcept;

/// Dimensionless hopping amplitudes of one extended SSH Hamiltonian.
struct HoppingParams {
  double v = 0.0;      // intra-cell
  double w = 0.0;      // 1st-neighbour inter-cell
  double nu = 0.0;     // 2nd-neighbour
  double mu = 0.0;     // 3rd-neighbour
  double gamma = 0.0;  // 4th-neighbour

  double operator[](Hopping h) const noexcept;
  double& operator[](Hopping h) noexcept;

  /// Amplitudes ordered by hopping range 0..4.
  std::array<double, 5> amplitudes() const noexcept { return {v, w, nu, mu, gamma}; }

  /// Longest range with a nonzero amplitude, or -1 for the zero Hamiltonian.
  int max_range() const noexcept;

  /// Copy with one channel replaced.
  HoppingParams with(Hopping h, double value) const noexcept;

  HoppingParams scaled(double s) const noexcept;

  /// Throws InvalidArgument unless all five amplitudes are finite.
  void validate() const;

  friend bool operator==(const HoppingParams&, const HoppingParams&) = default;
};

enum class Sublattice : int { A = 0, B = 1 };

/// Finite open chain of n_cells unit cells. Sites are ordered cell-major with
/// A before B: |m, A> -> 2m, |m, B> -> 2m + 1 for zero-based cell m.
struct ChainSpec {
  std::size_t n_cells = 0;

  std::size_t sites() const noexcept { return 2 * n_cells; }
  static constexpr std::size_t site_index(std::size_t cell, Sublattice s) noexcept {
    return 2 * cell + static_cast<std::size_t>(s);
  }
  static constexpr std::size_t cell_of(std::size_t site) noexcept { return site / 2; }
  static constexpr Sublattice sublattice_of(std::size_t site) noexcept {
    return site % 2 == 0 ? Sublattice::A : Sublattice::B;
  }

  friend bool operator==(const ChainSpec&, const ChainSpec&) = default;
};

/// Real symmetric 2N x 2N open-boundary Hamiltonian. Immutable once built.
class ChainHamiltonian {
 public:
  const ChainSpec& spec() const noexcept { return spec_; }
  const HoppingParams& params() const noexcept { return params_; }
  const Eigen::MatrixXd& matrix() const noexcept { return matrix_; }
  Eigen::Index dim() const noexcept { return matrix_.rows(); }

 private:
  friend ChainHamiltonian build_hamiltonian(const ChainSpec&, const HoppingParams&);
  ChainHamiltonian(ChainSpec spec, HoppingParams params, Eigen::MatrixXd matrix)
      : spec_(spec), params_(params), matrix_(std::move(matrix)) {}

  ChainSpec spec_;
  HoppingParams params_;
  Eigen::MatrixXd matrix_;
};

/// Builds H = sum_r t_r sum_m |m+r, A><m, B| + h.c. on the open chain.
/// Throws ChainTooShort when n_cells does not exceed the longest nonzero range,
/// InvalidArgument for n_cells == 0 or non-finite amplitudes.
ChainHamiltonian build_hamiltonian(const ChainSpec& spec, const HoppingParams& params);

/// Chiral operator Gamma = diag(+1 on A, -1 on B) in canonical ordering.
Eigen::VectorXd chiral_signs(const ChainSpec& spec);

/// Bulk d-vector at wavenumber k; a(k) = d_x + i d_y. d_0 = d_z = 0 always.
struct BlochVector {
  double k = 0.0;
  double dx = 0.0;
  double dy = 0.0;

  double norm() const noexcept;
  std::complex<double> as_complex() const noexcept { return {dx, dy}; }
};

/// d_x = sum_r t_r cos(r k), d_y = sum_r t_r sin(r k); k is reduced into [0, 2 pi).
BlochVector bloch_d(const HoppingParams& params, double k);

}  // namespace essh
