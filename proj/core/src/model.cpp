#include "essh/model.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "essh/error.hpp"

namespace essh {

std::string_view to_string(Hopping h) noexcept {
  switch (h) {
    case Hopping::v: return "v";
    case Hopping::w: return "w";
    case Hopping::nu: return "nu";
    case Hopping::mu: return "mu";
    case Hopping::gamma: return "gamma";
  }
  return "?";
}

std::optional<Hopping> parse_hopping(std::string_view name) noexcept {
  for (Hopping h : kAllHoppings) {
    if (to_string(h) == name) return h;
  }
  return std::nullopt;
}

double HoppingParams::operator[](Hopping h) const noexcept {
  switch (h) {
    case Hopping::v: return v;
    case Hopping::w: return w;
    case Hopping::nu: return nu;
    case Hopping::mu: return mu;
    case Hopping::gamma: return gamma;
  }
  return 0.0;
}

double& HoppingParams::operator[](Hopping h) noexcept {
  switch (h) {
    case Hopping::v: return v;
    case Hopping::w: return w;
    case Hopping::nu: return nu;
    case Hopping::mu: return mu;
    case Hopping::gamma: break;
  }
  return gamma;
}

int HoppingParams::max_range() const noexcept {
  const auto t = amplitudes();
  for (int r = 4; r >= 0; --r) {
    if (t[r] != 0.0) return r;
  }
  return -1;
}

HoppingParams HoppingParams::with(Hopping h, double value) const noexcept {
  HoppingParams out = *this;
  out[h] = value;
  return out;
}

HoppingParams HoppingParams::scaled(double s) const noexcept {
  return {s * v, s * w, s * nu, s * mu, s * gamma};
}

void HoppingParams::validate() const {
  for (Hopping h : kAllHoppings) {
    if (!std::isfinite((*this)[h])) {
      std::ostringstream os;
      os << "hopping amplitude '" << to_string(h) << "' is not finite";
      throw InvalidArgument(os.str());
    }
  }
}

ChainHamiltonian build_hamiltonian(const ChainSpec& spec, const HoppingParams& params) {
  params.validate();
  if (spec.n_cells == 0) throw InvalidArgument("chain must have at least one unit cell");
  const int longest = params.max_range();
  if (longest >= 0 && spec.n_cells <= static_cast<std::size_t>(longest)) {
    std::ostringstream os;
    os << "chain too short: " << spec.n_cells << " cells cannot host range-" << longest
       << " hopping '" << to_string(static_cast<Hopping>(longest)) << "'";
    throw ChainTooShort(os.str());
  }

  const auto n = static_cast<Eigen::Index>(spec.sites());
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  const auto t = params.amplitudes();
  for (std::size_t r = 0; r < t.size(); ++r) {
    if (t[r] == 0.0) continue;
    for (std::size_t m = 0; m + r < spec.n_cells; ++m) {
      const auto a = static_cast<Eigen::Index>(ChainSpec::site_index(m + r, Sublattice::A));
      const auto b = static_cast<Eigen::Index>(ChainSpec::site_index(m, Sublattice::B));
      h(a, b) = t[r];
      h(b, a) = t[r];
    }
  }
  return ChainHamiltonian(spec, params, std::move(h));
}

Eigen::VectorXd chiral_signs(const ChainSpec& spec) {
  Eigen::VectorXd g(static_cast<Eigen::Index>(spec.sites()));
  for (Eigen::Index s = 0; s < g.size(); ++s) g(s) = (s % 2 == 0) ? 1.0 : -1.0;
  return g;
}

double BlochVector::norm() const noexcept { return std::hypot(dx, dy); }

BlochVector bloch_d(const HoppingParams& params, double k) {
  params.validate();
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double kr = std::fmod(k, two_pi);
  if (kr < 0.0) kr += two_pi;
  const auto t = params.amplitudes();
  BlochVector d{kr, 0.0, 0.0};
  for (std::size_t r = 0; r < t.size(); ++r) {
    if (t[r] == 0.0) continue;
    const double phase = static_cast<double>(r) * kr;
    d.dx += t[r] * std::cos(phase);
    d.dy += t[r] * std::sin(phase);
  }
  return d;
}

}  // namespace essh
