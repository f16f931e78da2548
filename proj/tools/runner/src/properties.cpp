#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <random>

#include "essh/essh.hpp"
#include "essh/runner/csv.hpp"
#include "essh/runner/run.hpp"

namespace essh::runner {
namespace {

struct Check {
  std::string name;
  double tolerance;
  // returns the deviation of one randomized trial
  std::function<double(std::mt19937_64&)> trial;
};

HoppingParams random_params(std::mt19937_64& rng, std::size_t cells) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  HoppingParams p;
  for (Hopping h : kAllHoppings) p[h] = static_cast<std::size_t>(range_of(h)) < cells ? u(rng) : 0.0;
  return p;
}

Eigen::VectorXd random_state(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> g;
  Eigen::VectorXd x(n);
  for (Eigen::Index i = 0; i < n; ++i) x(i) = g(rng);
  return x.normalized();
}

std::size_t random_cells(std::mt19937_64& rng) {
  return std::uniform_int_distribution<std::size_t>(6, 30)(rng);
}

struct QuenchSample {
  EigenSystem es;
  QuenchRecord record;
};

QuenchSample random_quench(std::mt19937_64& rng) {
  const ChainSpec spec{random_cells(rng)};
  const auto initial = random_params(rng, spec.n_cells);
  const auto final_params = random_params(rng, spec.n_cells);
  auto es = diagonalize(build_hamiltonian(spec, final_params));
  QuenchSetup setup{initial, final_params, spec, random_state(rng, static_cast<Eigen::Index>(spec.sites())),
                    uniform_time_grid(20.0, 41)};
  auto record = evolve(setup, es, 1);
  return {std::move(es), std::move(record)};
}

std::vector<Check> checks() {
  return {
      {"chiral_symmetry", 0.0,
       [](std::mt19937_64& rng) {
         const ChainSpec spec{random_cells(rng)};
         const auto h = build_hamiltonian(spec, random_params(rng, spec.n_cells));
         const Eigen::VectorXd g = chiral_signs(spec);
         return (g.asDiagonal() * h.matrix() * g.asDiagonal() + h.matrix()).cwiseAbs().maxCoeff();
       }},
      {"spectral_pairing", 1e-9,
       [](std::mt19937_64& rng) {
         const ChainSpec spec{random_cells(rng)};
         const auto es = diagonalize(build_hamiltonian(spec, random_params(rng, spec.n_cells)));
         return (es.energies + es.energies.reverse()).cwiseAbs().maxCoeff();
       }},
      {"parseval", 1e-10,
       [](std::mt19937_64& rng) {
         const auto q = random_quench(rng);
         return std::abs(q.record.coefficients.squaredNorm() - 1.0);
       }},
      {"unitarity", 1e-10,
       [](std::mt19937_64& rng) {
         const auto q = random_quench(rng);
         return (q.record.density.colwise().sum().array() - 1.0).abs().maxCoeff();
       }},
      {"survival_dual_formula", 1e-10,
       [](std::mt19937_64& rng) {
         const auto q = random_quench(rng);
         const auto direct =
             survival_probability(q.record.coefficients, q.record.energies, q.record.setup.time_grid);
         double worst = 0.0;
         for (std::size_t i = 0; i < direct.size(); ++i) {
           worst = std::max(worst, std::abs(direct[i] - q.record.survival[i]));
         }
         return worst;
       }},
      {"winding_grid_refinement", 0.0,
       [](std::mt19937_64& rng) {
         for (;;) {
           const auto p = random_params(rng, 5);
           if (min_gap(p, 4096) < 1e-2) continue;
           const int coarse = winding_number(p, 4096).winding;
           const int fine = winding_number(p, 16384).winding;
           return static_cast<double>(std::abs(coarse - fine));
         }
       }},
  };
}

}  // namespace

ExperimentOutput run_property_check(const ExperimentConfig& config) {
  CsvBuilder csv({"property", "trials", "max_deviation", "tolerance", "status"});
  ExperimentOutput out;
  std::uint32_t salt = 0;
  for (const auto& check : checks()) {
    // each property draws from its own stream so adding one never shifts another
    std::seed_seq seq{static_cast<std::uint32_t>(config.seed), static_cast<std::uint32_t>(config.seed >> 32),
                      static_cast<std::uint32_t>(++salt)};
    std::mt19937_64 rng(seq);
    double worst = 0.0;
    for (std::size_t t = 0; t < config.trials; ++t) worst = std::max(worst, check.trial(rng));
    const bool ok = worst <= check.tolerance;
    csv.row(std::vector<std::string>{check.name, std::to_string(config.trials), format_double(worst),
                                     format_double(check.tolerance), ok ? "pass" : "fail"});
    if (!ok) out.failures.push_back({check.name, "deviation " + format_double(worst) + " exceeds tolerance"});
  }
  out.artifacts.push_back({"properties.csv", csv.text()});
  return out;
}

}  // namespace essh::runner
