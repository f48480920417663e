#include <cmath>
#include <numbers>
#include <vector>

#include <doctest.h>

#include "oracle_helpers.hpp"
#include "qpm/common.hpp"
#include "qpm/constants.hpp"
#include "qpm/orbit.hpp"
#include "qpm/rng.hpp"

using namespace qpm;

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Principal-branch arctan form of the time law, valid on theta in (0, pi):
//   t/T = [2 atan(sqrt((1-e)/(1+e)) tan(theta/2))
//          - e sqrt(1-e^2) sin(theta)/(1+e cos(theta))] / 2pi
double arctan_form(double theta, double e) {
  const double half = 2.0 * std::atan(std::sqrt((1.0 - e) / (1.0 + e)) *
                                      std::tan(0.5 * theta));
  const double sin_e = std::sqrt(1.0 - e * e) * std::sin(theta) /
                       (1.0 + e * std::cos(theta));
  return (half - e * sin_e) / kTwoPi;
}

const std::vector<double> kEccGrid{0.0, 0.1, 0.26, 0.5, 0.75, 0.9, 0.95};
} // namespace

TEST_CASE("time fraction matches the equal-areas quadrature oracle") {
  for (double e : kEccGrid) {
    for (int i = 0; i < 144; ++i) {
      const double theta = kTwoPi * (i + 0.5) / 144.0;
      const double got = orbit::kepler_time_fraction(theta, e);
      const double want = oracle::equal_areas_time_fraction(theta, e);
      CHECK(std::abs(got - want) <= 1e-9 * std::max(want, 1e-12));
    }
  }
}

TEST_CASE("time fraction equals the principal-branch arctan form on (0, pi)") {
  for (double e : kEccGrid) {
    for (int i = 1; i <= 97; ++i) {
      const double theta = 0.01 + (std::numbers::pi - 0.02) * i / 98.0;
      CHECK(orbit::kepler_time_fraction(theta, e) ==
            doctest::Approx(arctan_form(theta, e)).epsilon(1e-12));
    }
  }
}

TEST_CASE("time fraction endpoints and periodicity") {
  for (double e : kEccGrid) {
    CHECK(orbit::kepler_time_fraction(0.0, e) == 0.0);
    CHECK(orbit::kepler_time_fraction(std::numbers::pi, e) ==
          doctest::Approx(0.5).epsilon(1e-14));
    // theta reduced modulo 2pi
    CHECK(orbit::kepler_time_fraction(1.25 + kTwoPi, e) ==
          doctest::Approx(orbit::kepler_time_fraction(1.25, e)).epsilon(1e-12));
  }
}

TEST_CASE("time fraction is strictly increasing") {
  for (double e : {0.0, 0.26, 0.6, 0.95}) {
    double prev = 0.0;
    for (int i = 1; i < 10000; ++i) {
      const double t = orbit::kepler_time_fraction(kTwoPi * i / 10000.0, e);
      CHECK(t > prev);
      prev = t;
    }
    CHECK(prev < 1.0);
  }
}

TEST_CASE("pdf: normalization, derivative of the time law, apogee/perigee") {
  for (double e : kEccGrid) {
    const double norm = oracle::integrate(
        [&](double th) { return orbit::orbit_pdf(th, e); }, 0.0, kTwoPi, 2000);
    CHECK(norm == doctest::Approx(1.0).epsilon(1e-12));

    for (double theta : {0.3, 1.0, 2.5, 4.0, 5.9}) {
      const double h = 1e-6;
      const double fd = (orbit::kepler_time_fraction(theta + h, e) -
                         orbit::kepler_time_fraction(theta - h, e)) /
                        (2.0 * h);
      CHECK(orbit::orbit_pdf(theta, e) == doctest::Approx(fd).epsilon(1e-6));
    }
  }
  // apogee/perigee density ratio ((1+e)/(1-e))^2; ~2.9 at the NPP fit
  const double ratio = orbit::orbit_pdf(std::numbers::pi, 0.26) /
                       orbit::orbit_pdf(0.0, 0.26);
  CHECK(ratio == doctest::Approx(std::pow(1.26 / 0.74, 2)).epsilon(1e-12));
  CHECK(ratio == doctest::Approx(2.8995).epsilon(1e-4));
}

TEST_CASE("sampler round-trips through the time law") {
  for (double e : kEccGrid) {
    for (int i = 0; i < 143; ++i) {
      const double u = (i + 0.5) / 143.0;
      const double theta = orbit::sample_anomaly(e, u);
      CHECK(theta >= 0.0);
      CHECK(theta < kTwoPi);
      CHECK(orbit::kepler_time_fraction(theta, e) ==
            doctest::Approx(u).epsilon(1e-9));
    }
    CHECK(orbit::sample_anomaly(e, 0.0) == 0.0);
  }
}

TEST_CASE("sampler is monotone in the uniform draw") {
  for (double e : {0.26, 0.9}) {
    double prev = -1.0;
    for (int i = 0; i < 1000; ++i) {
      const double theta = orbit::sample_anomaly(e, i / 1000.0);
      CHECK(theta > prev);
      prev = theta;
    }
  }
}

TEST_CASE("eccentric anomaly solver satisfies Kepler's equation") {
  for (double e : kEccGrid) {
    for (int i = 0; i < 200; ++i) {
      const double m = kTwoPi * i / 200.0;
      const double big_e = orbit::solve_eccentric_anomaly(m, e);
      CHECK(big_e >= 0.0);
      CHECK(big_e < kTwoPi + 1e-12);
      CHECK(big_e - e * std::sin(big_e) == doctest::Approx(m).epsilon(1e-11));
    }
  }
}

TEST_CASE("sampled anomalies match the pdf (KS) and reproduce E[cos] = -e") {
  const double e = 0.26;
  const std::uint64_t n = 200000;
  std::vector<double> samples(n);
  double cos_sum = 0.0;
  for (std::uint64_t i = 0; i < n; ++i) {
    samples[i] = orbit::sample_anomaly(e, rng::uniform_draw(7, i, 0));
    cos_sum += std::cos(samples[i]);
  }
  const double ks = oracle::ks_statistic(
      samples, [&](double th) { return orbit::kepler_time_fraction(th, e); });
  CHECK(ks < 0.004); // ~1.8x the 1% KS critical value at n = 2e5
  // time-averaged cos(theta) on a Kepler orbit is exactly -e
  CHECK(cos_sum / static_cast<double>(n) ==
        doctest::Approx(-e).epsilon(0.03));
}

TEST_CASE("radius at the conic landmarks") {
  const orbit::OrbitShape shape{0.26, 1.4, 3.9};
  CHECK(orbit::radius(0.0, shape) == doctest::Approx(1.4 * 0.74).epsilon(1e-14));
  CHECK(orbit::radius(0.0, shape) == doctest::Approx(1.036).epsilon(1e-12));
  CHECK(orbit::radius(std::numbers::pi, shape) ==
        doctest::Approx(1.4 * 1.26).epsilon(1e-12));
  CHECK(orbit::radius(std::numbers::pi / 2.0, shape) ==
        doctest::Approx(1.4 * (1.0 - 0.26 * 0.26)).epsilon(1e-12));
  // circular orbit: constant radius
  const orbit::OrbitShape circle{0.0, 2.0, 1.0};
  CHECK(orbit::radius(1.234, circle) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("apply_field: perpendicular no-op, antisymmetry, clamping") {
  const orbit::OrbitShape shape{0.26, 1.4, 3.9};

  SUBCASE("psi = 90 degrees leaves the shape bit-identical") {
    bool clamped = true;
    const auto out =
        orbit::apply_field(shape, {2.0, 90.0, 0.1}, &clamped);
    CHECK(out.eccentricity == shape.eccentricity);
    CHECK(out.semimajor_angstrom == shape.semimajor_angstrom);
    CHECK(out.z_eff == shape.z_eff);
    CHECK_FALSE(clamped);
  }

  SUBCASE("kappa = 0 or field = 0 leave the shape unchanged") {
    CHECK(orbit::apply_field(shape, {2.0, 0.0, 0.0}).eccentricity ==
          shape.eccentricity);
    CHECK(orbit::apply_field(shape, {0.0, 0.0, 0.1}).eccentricity ==
          shape.eccentricity);
  }

  SUBCASE("psi and 180 - psi shift eccentricity antisymmetrically") {
    for (double psi : {0.0, 20.0, 45.0, 75.0}) {
      const double up =
          orbit::apply_field(shape, {1.5, psi, 0.02}).eccentricity - 0.26;
      const double down =
          orbit::apply_field(shape, {1.5, 180.0 - psi, 0.02}).eccentricity -
          0.26;
      // adding the shift to eccentricity and subtracting it back re-rounds,
      // so antisymmetry holds only to rounding accuracy
      CHECK(up == doctest::Approx(-down).epsilon(1e-12));
      CHECK(up == doctest::Approx(0.03 * units::cos_deg(psi)).epsilon(1e-12));
    }
  }

  SUBCASE("shifts clamp to [0, max] and report") {
    bool clamped = false;
    const auto hi = orbit::apply_field(shape, {10.0, 0.0, 1.0}, &clamped);
    CHECK(hi.eccentricity == orbit::kMaxEccentricity);
    CHECK(clamped);
    clamped = false;
    const auto lo = orbit::apply_field(shape, {10.0, 180.0, 1.0}, &clamped);
    CHECK(lo.eccentricity == 0.0);
    CHECK(clamped);
  }
}

TEST_CASE("shape and field validation") {
  CHECK_NOTHROW((orbit::OrbitShape{0.26, 1.4, 3.9}.validate()));
  CHECK_NOTHROW((orbit::OrbitShape{0.0, 0.1, 0.5}.validate()));
  CHECK_THROWS_AS((orbit::OrbitShape{-0.1, 1.4, 3.9}.validate()), DomainError);
  CHECK_THROWS_AS((orbit::OrbitShape{0.96, 1.4, 3.9}.validate()), DomainError);
  CHECK_THROWS_AS((orbit::OrbitShape{0.26, 0.0, 3.9}.validate()), DomainError);
  CHECK_THROWS_AS((orbit::OrbitShape{0.26, 1.4, -1.0}.validate()),
                  DomainError);

  CHECK_NOTHROW((orbit::FieldPerturbation{1.0, 90.0, 0.01}.validate()));
  CHECK_THROWS_AS((orbit::FieldPerturbation{-1.0, 0.0, 0.01}.validate()),
                  DomainError);
  CHECK_THROWS_AS((orbit::FieldPerturbation{1.0, -5.0, 0.01}.validate()),
                  DomainError);
  CHECK_THROWS_AS((orbit::FieldPerturbation{1.0, 181.0, 0.01}.validate()),
                  DomainError);
  CHECK_THROWS_AS((orbit::FieldPerturbation{1.0, 0.0, -0.01}.validate()),
                  DomainError);
}
