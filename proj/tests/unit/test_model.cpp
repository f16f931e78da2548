#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "essh/error.hpp"
#include "essh/model.hpp"
#include "essh/spectra.hpp"
#include "oracles.hpp"

using essh::ChainSpec;
using essh::HoppingParams;

TEST_SUITE("model") {

TEST_CASE("single dimer holds only the intra-cell bond") {
  const auto h = essh::build_hamiltonian({1}, {.v = 0.7});
  REQUIRE(h.dim() == 2);
  CHECK(h.matrix()(0, 0) == 0.0);
  CHECK(h.matrix()(0, 1) == 0.7);
  CHECK(h.matrix()(1, 0) == 0.7);
  CHECK(h.matrix()(1, 1) == 0.0);
}

TEST_CASE("two-cell chain matches characteristic-polynomial oracle") {
  const auto h = essh::build_hamiltonian({2}, {.v = 0.2, .w = 0.5});
  const auto roots = essh_test::real_roots(essh_test::characteristic_polynomial(h.matrix()));
  REQUIRE(roots.size() == 4);
  // open 4-site chain with hops (v, w, v): E = +-(sqrt(w^2 + 4 v^2) +- w) / 2
  const double s = std::sqrt(0.25 + 4 * 0.04);
  const double expected[] = {-(s + 0.5) / 2, -(s - 0.5) / 2, (s - 0.5) / 2, (s + 0.5) / 2};
  for (int i = 0; i < 4; ++i) CHECK(roots[i] == doctest::Approx(expected[i]).epsilon(1e-12));
  CHECK(expected[3] == doctest::Approx(0.5701562118716424).epsilon(1e-14));
  CHECK(expected[2] == doctest::Approx(0.0701562118716424).epsilon(1e-12));

  const auto es = essh::diagonalize(h);
  for (int i = 0; i < 4; ++i) CHECK(std::abs(es.energies(i) - expected[i]) < 1e-12);
}

TEST_CASE("fourth-neighbour hopping needs five cells") {
  CHECK_THROWS_AS(essh::build_hamiltonian({3}, {.gamma = 0.5}), essh::ChainTooShort);
  CHECK_THROWS_AS(essh::build_hamiltonian({4}, {.gamma = 0.5}), essh::ChainTooShort);
  CHECK_NOTHROW(essh::build_hamiltonian({5}, {.gamma = 0.5}));
  CHECK_THROWS_AS(essh::build_hamiltonian({1}, {.w = 0.1}), essh::ChainTooShort);
  CHECK_THROWS_AS(essh::build_hamiltonian({0}, {.v = 1.0}), essh::InvalidArgument);
}

TEST_CASE("non-finite amplitudes are rejected") {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(essh::build_hamiltonian({10}, {.mu = nan}), essh::InvalidArgument);
  CHECK_THROWS_AS(essh::bloch_d({.w = std::numeric_limits<double>::infinity()}, 0.0), essh::InvalidArgument);
}

TEST_CASE("bond placement and bandwidth") {
  const HoppingParams p{0.11, 0.22, 0.33, 0.44, 0.55};
  const ChainSpec spec{12};
  const auto h = essh::build_hamiltonian(spec, p);
  const auto& m = h.matrix();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (m(i, j) == 0.0) continue;
      CHECK(std::abs(i - j) <= 9);
      // one index on A, the other on B; value fixed by the cell offset
      const Eigen::Index a = (i % 2 == 0) ? i : j;
      const Eigen::Index b = (i % 2 == 0) ? j : i;
      REQUIRE(a % 2 == 0);
      REQUIRE(b % 2 == 1);
      const auto r = a / 2 - b / 2;
      REQUIRE(r >= 0);
      REQUIRE(r <= 4);
      CHECK(m(i, j) == p[static_cast<essh::Hopping>(r)]);
    }
  }
  // every allowed bond is present
  for (int r = 0; r <= 4; ++r) {
    for (std::size_t cell = 0; cell + r < spec.n_cells; ++cell) {
      const auto a = ChainSpec::site_index(cell + r, essh::Sublattice::A);
      const auto b = ChainSpec::site_index(cell, essh::Sublattice::B);
      CHECK(m(a, b) == p[static_cast<essh::Hopping>(r)]);
    }
  }
}

TEST_CASE("chirality and symmetry hold exactly for random parameters") {
  std::mt19937_64 rng(20240601);
  for (int trial = 0; trial < 100; ++trial) {
    const auto p = essh_test::random_params(rng);
    const ChainSpec spec{5 + static_cast<std::size_t>(trial % 20)};
    const auto h = essh::build_hamiltonian(spec, p);
    const auto& m = h.matrix();
    const Eigen::VectorXd g = essh::chiral_signs(spec);
    const Eigen::MatrixXd conj = g.asDiagonal() * m * g.asDiagonal();
    CHECK((conj + m).cwiseAbs().maxCoeff() == 0.0);
    CHECK((m - m.transpose()).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("bloch_d closed forms") {
  const auto zero = essh::bloch_d({}, 1.234);
  CHECK(zero.dx == 0.0);
  CHECK(zero.dy == 0.0);

  const auto pure_v = essh::bloch_d({.v = 1.0}, std::numbers::pi / 2);
  CHECK(pure_v.dx == doctest::Approx(1.0));
  CHECK(pure_v.dy == doctest::Approx(0.0));

  const auto pure_w = essh::bloch_d({.w = 1.0}, std::numbers::pi / 2);
  CHECK(std::abs(pure_w.dx) < 1e-15);
  CHECK(pure_w.dy == doctest::Approx(1.0));

  const auto wrapped = essh::bloch_d({.w = 1.0}, -std::numbers::pi / 2);
  CHECK(wrapped.k == doctest::Approx(1.5 * std::numbers::pi));
  CHECK(wrapped.dy == doctest::Approx(-1.0));
}

TEST_CASE("|d(k)|^2 equals |a(k)|^2 from the complex polynomial") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> uk(-10.0, 10.0);
  for (int trial = 0; trial < 100; ++trial) {
    const auto p = essh_test::random_params(rng);
    const double k = uk(rng);
    const auto d = essh::bloch_d(p, k);
    const auto a = essh_test::a_of_k(p, k);
    CHECK(std::abs(d.dx * d.dx + d.dy * d.dy - std::norm(a)) < 1e-12);
    CHECK(std::abs(d.dx - a.real()) < 1e-12);
    CHECK(std::abs(d.dy - a.imag()) < 1e-12);
  }
}

TEST_CASE("hopping names round-trip") {
  for (auto h : essh::kAllHoppings) CHECK(essh::parse_hopping(essh::to_string(h)) == h);
  CHECK_FALSE(essh::parse_hopping("delta").has_value());
  const HoppingParams p{1, 2, 3, 4, 5};
  CHECK(p.max_range() == 4);
  CHECK(HoppingParams{}.max_range() == -1);
  CHECK(p.with(essh::Hopping::mu, 0.0).mu == 0.0);
}

}  // TEST_SUITE
