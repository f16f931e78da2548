#pragma once

// Independent reference computations used only by the test suites. Nothing
// here calls the eigensolver or evolution code it is used to check.

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "essh/model.hpp"

namespace essh_test {

/// Coefficients c_0..c_n of det(lambda I - A) by Faddeev-LeVerrier.
inline std::vector<double> characteristic_polynomial(const Eigen::MatrixXd& a) {
  const Eigen::Index n = a.rows();
  std::vector<double> c(static_cast<std::size_t>(n + 1), 0.0);
  c[static_cast<std::size_t>(n)] = 1.0;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
  for (Eigen::Index k = 1; k <= n; ++k) {
    m = a * m + c[static_cast<std::size_t>(n - k + 1)] * id;
    c[static_cast<std::size_t>(n - k)] = -(a * m).trace() / static_cast<double>(k);
  }
  return c;
}

inline double eval_poly(const std::vector<double>& c, double x) {
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
  return acc;
}

inline std::vector<double> derivative(const std::vector<double>& c) {
  std::vector<double> d;
  for (std::size_t k = 1; k < c.size(); ++k) d.push_back(static_cast<double>(k) * c[k]);
  return d;
}

/// All roots of a real-rooted polynomial, ascending, with multiplicity.
/// Critical points (roots of p', real by Rolle) cut the line into monotone
/// pieces; each piece holds at most one root, found by bisection.
inline std::vector<double> real_roots(const std::vector<double>& c) {
  const std::size_t degree = c.size() - 1;
  if (degree == 0) return {};
  if (degree == 1) return {-c[0] / c[1]};
  double bound = 0.0;
  for (std::size_t k = 0; k < degree; ++k) bound = std::max(bound, std::abs(c[k] / c[degree]));
  bound += 1.0;

  std::vector<double> cuts{-bound};
  for (double r : real_roots(derivative(c))) cuts.push_back(r);
  cuts.push_back(bound);

  std::vector<double> roots;
  const double zero_tol = 1e-13;
  for (std::size_t i = 0; i + 1 < cuts.size() && roots.size() < degree; ++i) {
    double lo = cuts[i], hi = cuts[i + 1];
    double flo = eval_poly(c, lo), fhi = eval_poly(c, hi);
    if (std::abs(flo) < zero_tol && i > 0) {
      roots.push_back(lo);  // root at a critical point: counted from each side
      continue;
    }
    if ((flo < 0.0) == (fhi < 0.0)) continue;
    for (int it = 0; it < 200 && hi - lo > 1e-16 * std::max(1.0, std::abs(lo)); ++it) {
      const double mid = 0.5 * (lo + hi);
      const double fm = eval_poly(c, mid);
      if ((fm < 0.0) == (flo < 0.0)) {
        lo = mid;
        flo = fm;
      } else {
        hi = mid;
      }
    }
    roots.push_back(0.5 * (lo + hi));
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

/// exp(-i H t) by scaling and squaring of a truncated Taylor series.
inline Eigen::MatrixXcd propagator_taylor(const Eigen::MatrixXd& h, double t) {
  const Eigen::Index n = h.rows();
  const Eigen::MatrixXcd a = std::complex<double>(0.0, -t) * h.cast<std::complex<double>>();
  const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  while (norm / std::pow(2.0, squarings) > 0.25) ++squarings;
  const Eigen::MatrixXcd scaled = a / std::pow(2.0, squarings);
  Eigen::MatrixXcd term = Eigen::MatrixXcd::Identity(n, n);
  Eigen::MatrixXcd sum = term;
  for (int k = 1; k <= 30; ++k) {
    term = term * scaled / static_cast<double>(k);
    sum += term;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

/// a(k) = sum_r t_r e^{irk} evaluated term by term.
inline std::complex<double> a_of_k(const essh::HoppingParams& p, double k) {
  const auto t = p.amplitudes();
  std::complex<double> acc = 0.0;
  for (std::size_t r = 0; r < t.size(); ++r) acc += t[r] * std::exp(std::complex<double>(0.0, static_cast<double>(r) * k));
  return acc;
}

inline essh::HoppingParams random_params(std::mt19937_64& rng, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  return {u(rng), u(rng), u(rng), u(rng), u(rng)};
}

inline Eigen::VectorXd random_unit_vector(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> g;
  Eigen::VectorXd x(n);
  for (Eigen::Index i = 0; i < n; ++i) x(i) = g(rng);
  return x.normalized();
}

// Parameter sets from the five winding-number diagrams (windings 0..4).
inline const std::vector<essh::HoppingParams>& winding_diagram_params() {
  static const std::vector<essh::HoppingParams> sets = {
      {0.52, 0.54, 0.34, 0.27, 0.24},
      {0.1, 0.6, 0.28, 0.38, 0.0},
      {0.28, 0.2, 0.36, 0.36, 0.0},
      {0.1, 0.4, 0.28, 0.6, 0.0},
      {0.1, 0.17, 0.25, 0.42, 0.38},
  };
  return sets;
}

// Frozen values shared by both quench paths; C = 2 initial phase.
inline essh::HoppingParams path_initial_params() { return {0.0, 0.17, 0.43, 0.17, 0.37}; }

}  // namespace essh_test
