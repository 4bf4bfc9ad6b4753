#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "cavity/geometry.hpp"

using namespace cavity;
using std::numbers::pi;

namespace {

Eigen::MatrixXd coupling(const std::vector<double>& u) {
  const int n = static_cast<int>(u.size()) + 1;
  const std::vector<double> flat = coupling_matrix(u);
  Eigen::MatrixXd m(n, n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) m(r, c) = flat[static_cast<std::size_t>(r * n + c)];
  }
  return m;
}

std::vector<double> random_positions(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> d(-pi, pi);
  std::vector<double> u(n);
  for (auto& x : u) x = d(rng);
  return u;
}

}  // namespace

TEST_SUITE("geometry") {

TEST_CASE("chi examples") {
  CHECK(chi(std::vector<double>(5, 0.0)) == doctest::Approx(std::sqrt(5.0)));
  CHECK(chi(std::vector<double>{pi / 2, pi / 2}) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(chi(std::vector<double>{pi / 3}) == doctest::Approx(0.5));
}

TEST_CASE("zeta examples") {
  CHECK(zeta(std::vector<double>{0.3}) == 0.0);
  CHECK(zeta(std::vector<double>{2.9}) == 0.0);
  for (int n : {1, 2, 7}) CHECK(zeta(std::vector<double>(n, 0.0)) == doctest::Approx(0.0).epsilon(1e-15));
  // -(1)/(1.25) + 1 - (1 + 0.0625)/1.5625 = -0.8 + 1 - 0.68
  CHECK(zeta(std::vector<double>{0.0, pi / 3}) == doctest::Approx(-0.48).epsilon(1e-14));
}

TEST_CASE("node singularity is an explicit error") {
  CHECK_THROWS_AS(zeta(std::vector<double>{pi / 2}), NodeSingularityError);
  CHECK_THROWS_AS(bright_pair(std::vector<double>{pi / 2, -pi / 2}), NodeSingularityError);
  CHECK_NOTHROW(zeta(std::vector<double>{1.5}, 1e-12));
  CHECK_THROWS_AS(zeta(std::vector<double>{1.5}, 0.01), NodeSingularityError);
}

TEST_CASE("bright pair examples") {
  const BrightPair one = bright_pair(std::vector<double>{0.0});
  CHECK(one.chi == doctest::Approx(1.0));
  CHECK(one.plus_vector[0] == doctest::Approx(1 / std::sqrt(2.0)));
  CHECK(one.plus_vector[1] == doctest::Approx(1 / std::sqrt(2.0)));
  CHECK(one.dark_dim == 0);

  const BrightPair two = bright_pair(std::vector<double>{0.0, 0.0});
  CHECK(two.chi == doctest::Approx(std::sqrt(2.0)));
  CHECK(two.dark_dim == 1);
}

TEST_CASE("bright vectors are eigenvectors of the coupling matrix") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + trial % 6;
    const auto u = random_positions(rng, n);
    const BrightPair b = bright_pair(u);
    const Eigen::MatrixXd v = coupling(u);
    const Eigen::Map<const Eigen::VectorXd> plus(b.plus_vector.data(), n + 1);
    const Eigen::Map<const Eigen::VectorXd> minus(b.minus_vector.data(), n + 1);
    CHECK((v * plus - b.chi * plus).norm() < 1e-12);
    CHECK((v * minus + b.chi * minus).norm() < 1e-12);
    CHECK(std::abs(plus.dot(minus)) < 1e-14);
    CHECK(plus.norm() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(minus.norm() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(plus[0]) == doctest::Approx(1 / std::sqrt(2.0)));
    CHECK(b.chi * b.chi == doctest::Approx(chi_squared(u)).epsilon(1e-14));
    CHECK(b.dark_dim == n - 1);
  }
}

TEST_CASE("completeness and darkness of the coupling matrix spectrum") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + trial % 5;
    const auto u = random_positions(rng, n);
    const double x = chi(u);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(coupling(u));
    const Eigen::VectorXd ev = es.eigenvalues();
    CHECK(ev[0] == doctest::Approx(-x).epsilon(1e-12));
    CHECK(ev[n] == doctest::Approx(x).epsilon(1e-12));
    for (int k = 1; k < n; ++k) {
      CHECK(std::abs(ev[k]) < 1e-12);
      CHECK(std::abs(es.eigenvectors()(0, k)) < 1e-12);
    }
  }
}

TEST_CASE("chi range with equality at nodes and antinodes") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + trial % 10;
    const double x = chi(random_positions(rng, n));
    CHECK(x >= 0.0);
    CHECK(x <= std::sqrt(static_cast<double>(n)) + 1e-15);
  }
  CHECK(chi(std::vector<double>{pi, -pi, 2 * pi}) == doctest::Approx(std::sqrt(3.0)));
}

TEST_CASE("zeta vanishes for a single atom away from nodes") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto u = random_positions(rng, 1);
    if (chi_squared(u) < 1e-10) continue;
    CHECK(zeta(u) == 0.0);
  }
}

TEST_CASE("chi_zeta agrees with the separate functions") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    const auto u = random_positions(rng, 4);
    const ChiZeta cz = chi_zeta(u);
    CHECK(cz.chi2 == doctest::Approx(chi_squared(u)));
    // independent evaluation of the defining formula
    double s2 = 0, s4 = 0;
    for (double x : u) {
      s2 += std::cos(x) * std::cos(x);
      s4 += std::pow(std::cos(x), 4);
    }
    CHECK(cz.zeta == doctest::Approx(-3.0 / s2 + 1.0 - s4 / (s2 * s2)).epsilon(1e-12));
  }
}

TEST_CASE("Tavis-Cummings sticks") {
  const StickSpectrum one = tavis_cummings_sticks(1);
  REQUIRE(one.lines.size() == 2);
  CHECK(one.lines[0].omega == -1.0);
  CHECK(one.lines[1].omega == 1.0);
  CHECK(one.lines[0].weight == 0.5);
  CHECK(one.total_weight() == 1.0);
  CHECK(one.origin == SpectrumOrigin::tavis_cummings);
  const StickSpectrum four = tavis_cummings_sticks(4);
  CHECK(four.lines[0].omega == -2.0);
  CHECK(four.lines[1].omega == 2.0);
  CHECK_THROWS(tavis_cummings_sticks(0));
}

}  // TEST_SUITE
