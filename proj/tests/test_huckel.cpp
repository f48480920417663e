#include <cmath>
#include <numeric>
#include <vector>

#include <doctest.h>

#include "oracle_helpers.hpp"
#include "qpm/common.hpp"
#include "qpm/huckel.hpp"

using namespace qpm;

namespace {

// Dense Huckel matrix for the oracle eigensolver.
std::vector<std::vector<double>> huckel_matrix(const huckel::PiSystem& sys) {
  std::vector<std::vector<double>> h(
      sys.atom_count, std::vector<double>(sys.atom_count, 0.0));
  for (int i = 0; i < sys.atom_count; ++i) h[i][i] = sys.alpha_shift[i];
  for (size_t b = 0; b < sys.bonds.size(); ++b) {
    const auto [i, j] = sys.bonds[b];
    h[i][j] = sys.bond_factor[b];
    h[j][i] = sys.bond_factor[b];
  }
  return h;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

} // namespace

TEST_CASE("benzene: energies, unit densities, symmetric orbital weights") {
  const auto result = huckel::solve(huckel::PiSystem::ring(6));

  const std::vector<double> want{-2.0, -1.0, -1.0, 1.0, 1.0, 2.0};
  REQUIRE(result.energies.size() == 6);
  for (int k = 0; k < 6; ++k) {
    CHECK(result.energies[k] == doctest::Approx(want[k]).epsilon(1e-10));
  }

  for (double q : result.densities) {
    CHECK(std::abs(q - 1.0) <= 1e-10);
  }

  const auto weights = huckel::symmetrized_weights(result);
  for (const auto& orbital : weights) {
    for (double w : orbital) {
      CHECK(std::abs(w - 1.0 / 6.0) <= 1e-10);
    }
  }
}

TEST_CASE("energies ascend, densities sum to the electron count") {
  auto ring8 = huckel::PiSystem::ring(8);
  ring8.alpha_shift[3] = 0.2;
  ring8.bond_factor[1] = 0.8;
  const auto result = huckel::solve(ring8);

  for (size_t k = 1; k < result.energies.size(); ++k) {
    CHECK(result.energies[k] >= result.energies[k - 1]);
  }
  double total = 0.0;
  for (double q : result.densities) total += q;
  CHECK(total == doctest::Approx(8.0).epsilon(1e-10));
}

TEST_CASE("eigenpairs satisfy the Huckel matrix and are orthonormal") {
  auto sys = huckel::PiSystem::ring(6);
  sys.alpha_shift[0] = 0.5;
  sys.alpha_shift[2] = -0.3;
  sys.bond_factor[4] = 1.1;
  const auto result = huckel::solve(sys);
  const auto h = huckel_matrix(sys);

  for (int k = 0; k < 6; ++k) {
    const auto& v = result.coefficients[k];
    for (int i = 0; i < 6; ++i) {
      double hv = 0.0;
      for (int j = 0; j < 6; ++j) hv += h[i][j] * v[j];
      CHECK(std::abs(hv - result.energies[k] * v[i]) <= 1e-10);
    }
    for (int k2 = 0; k2 <= k; ++k2) {
      const double want = k == k2 ? 1.0 : 0.0;
      CHECK(std::abs(dot(v, result.coefficients[k2]) - want) <= 1e-10);
    }
  }

  // cross-check energies against the independent Jacobi oracle
  const auto jac = oracle::jacobi_eigen(h);
  for (int k = 0; k < 6; ++k) {
    CHECK(result.energies[k] == doctest::Approx(jac.values[k]).epsilon(1e-10));
  }
}

TEST_CASE("two-site system: analytic energies and polarized density") {
  huckel::PiSystem dimer;
  dimer.atom_count = 2;
  dimer.bonds = {{0, 1}};
  dimer.alpha_shift = {0.0, 0.0};
  dimer.bond_factor = {1.0};
  dimer.electron_count = 2;

  SUBCASE("homonuclear: +-1 energies, even split") {
    const auto r = huckel::solve(dimer);
    CHECK(r.energies[0] == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(r.energies[1] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.densities[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.densities[1] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(huckel::density_asymmetry(r, 0, 1) == doctest::Approx(0.0));
  }

  SUBCASE("site shift h = 0.5 pulls density onto the shifted site") {
    dimer.alpha_shift[0] = 0.5;
    const auto r = huckel::solve(dimer);
    // eigenvalues of [[0.5, 1], [1, 0]]: 0.25 +- sqrt(4.25)/2
    const double disc = std::sqrt(4.25);
    CHECK(r.energies[0] == doctest::Approx(0.25 - 0.5 * disc).epsilon(1e-12));
    CHECK(r.energies[1] == doctest::Approx(0.25 + 0.5 * disc).epsilon(1e-12));
    // occupied orbital is the top of the ascending list (beta < 0); its
    // eigenvector solves v1 = (lambda - 0.5) v0 with lambda = 1.280776...
    const double lam = 0.25 + 0.5 * disc;
    const double v0_sq = 1.0 / (1.0 + (lam - 0.5) * (lam - 0.5));
    CHECK(r.densities[0] == doctest::Approx(2.0 * v0_sq).epsilon(1e-12));
    CHECK(r.densities[0] == doctest::Approx(1.242536).epsilon(1e-6));
    CHECK(r.densities[0] > 1.0);
    CHECK(huckel::density_asymmetry(r, 0, 1) ==
          doctest::Approx(r.densities[0] - r.densities[1]).epsilon(1e-15));
    CHECK(huckel::density_asymmetry(r, 0, 1) > 0.0);
    CHECK(huckel::density_asymmetry(r, 1, 0) ==
          -huckel::density_asymmetry(r, 0, 1));
  }

  SUBCASE("bond factor scales the spectrum") {
    dimer.bond_factor[0] = 2.0;
    const auto r = huckel::solve(dimer);
    CHECK(r.energies[0] == doctest::Approx(-2.0).epsilon(1e-12));
    CHECK(r.energies[1] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(r.densities[0] == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("butadiene chain: golden-ratio spectrum, alternant pairing") {
  huckel::PiSystem chain;
  chain.atom_count = 4;
  chain.bonds = {{0, 1}, {1, 2}, {2, 3}};
  chain.alpha_shift = {0.0, 0.0, 0.0, 0.0};
  chain.bond_factor = {1.0, 1.0, 1.0};
  chain.electron_count = 4;

  const auto r = huckel::solve(chain);
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  CHECK(r.energies[0] == doctest::Approx(-phi).epsilon(1e-12));
  CHECK(r.energies[1] == doctest::Approx(-(phi - 1.0)).epsilon(1e-12));
  CHECK(r.energies[2] == doctest::Approx(phi - 1.0).epsilon(1e-12));
  CHECK(r.energies[3] == doctest::Approx(phi).epsilon(1e-12));
  // alternant hydrocarbon: spectrum pairs +-x and all densities are 1
  for (double q : r.densities) CHECK(q == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("partially occupied degenerate shell fills evenly") {
  // ring(4): energies {-2, 0, 0, 2}; 4 electrons put 2 in the top orbital
  // and split the remaining 2 evenly across the degenerate x = 0 pair, so
  // every site stays equivalent no matter how the eigenbasis is rotated.
  const auto r = huckel::solve(huckel::PiSystem::ring(4));
  CHECK(r.energies[0] == doctest::Approx(-2.0).epsilon(1e-10));
  CHECK(r.energies[1] == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(r.energies[2] == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(r.energies[3] == doctest::Approx(2.0).epsilon(1e-10));
  for (double q : r.densities) {
    CHECK(std::abs(q - 1.0) <= 1e-10);
  }
}

TEST_CASE("pi-system validation") {
  CHECK_THROWS_AS(huckel::PiSystem::ring(2), DomainError);
  // an odd ring rounds down to the nearest even electron count and solves
  const auto penta = huckel::solve(huckel::PiSystem::ring(5));
  CHECK(std::accumulate(penta.densities.begin(), penta.densities.end(), 0.0) ==
        doctest::Approx(4.0).epsilon(1e-12));

  huckel::PiSystem sys;
  sys.atom_count = 4;
  sys.bonds = {{0, 1}, {2, 3}};
  sys.alpha_shift = {0.0, 0.0, 0.0, 0.0};
  sys.bond_factor = {1.0, 1.0};
  sys.electron_count = 4;
  CHECK_THROWS_AS(huckel::solve(sys), DomainError); // disconnected graph

  sys.bonds = {{0, 1}, {1, 2}, {2, 3}, {1, 0}};
  sys.bond_factor = {1.0, 1.0, 1.0, 1.0};
  CHECK_THROWS_AS(huckel::solve(sys), DomainError); // duplicate bond

  sys.bonds = {{0, 1}, {1, 2}, {2, 3}, {3, 3}};
  CHECK_THROWS_AS(huckel::solve(sys), DomainError); // self bond

  sys.bonds = {{0, 1}, {1, 2}, {2, 4}};
  sys.bond_factor = {1.0, 1.0, 1.0};
  CHECK_THROWS_AS(huckel::solve(sys), DomainError); // index out of range

  sys.bonds = {{0, 1}, {1, 2}, {2, 3}};
  sys.electron_count = 3;
  CHECK_THROWS_AS(huckel::solve(sys), DomainError); // odd electrons

  sys.electron_count = 10;
  CHECK_THROWS_AS(huckel::solve(sys), DomainError); // more than 2 per orbital

  sys.electron_count = 4;
  sys.alpha_shift = {0.0, 0.0};
  CHECK_THROWS_AS(huckel::solve(sys), DomainError); // alpha size mismatch

  sys.alpha_shift = {0.0, 0.0, 0.0, 0.0};
  sys.bond_factor = {1.0};
  CHECK_THROWS_AS(huckel::solve(sys), DomainError); // bond factor mismatch
}
