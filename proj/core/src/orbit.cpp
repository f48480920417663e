#include "qpm/orbit.hpp"

#include <cmath>
#include <numbers>

#include "qpm/common.hpp"
#include "qpm/constants.hpp"

namespace qpm::orbit {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Reduce an angle to [0, 2pi).
double wrap_angle(double x) {
  double r = std::fmod(x, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  return r;
}

void check_eccentricity(double eccentricity) {
  if (!std::isfinite(eccentricity) || eccentricity < 0.0 ||
      eccentricity > kMaxEccentricity) {
    throw DomainError("eccentricity must lie in [0, 0.95], got " +
                      std::to_string(eccentricity));
  }
}

} // namespace

void OrbitShape::validate() const {
  check_eccentricity(eccentricity);
  if (!std::isfinite(semimajor_angstrom) || semimajor_angstrom <= 0.0) {
    throw DomainError("orbit semimajor axis must be positive, got " +
                      std::to_string(semimajor_angstrom) + " A");
  }
  if (!std::isfinite(z_eff) || z_eff <= 0.0) {
    throw DomainError("effective nuclear charge must be positive, got " +
                      std::to_string(z_eff));
  }
}

void FieldPerturbation::validate() const {
  if (!std::isfinite(field_v_per_um) || field_v_per_um < 0.0) {
    throw DomainError("field magnitude must be >= 0, got " +
                      std::to_string(field_v_per_um) + " V/um");
  }
  if (!std::isfinite(field_angle_deg) || field_angle_deg < 0.0 ||
      field_angle_deg > 180.0) {
    throw DomainError("field angle must lie in [0, 180] deg, got " +
                      std::to_string(field_angle_deg));
  }
  if (!std::isfinite(kappa_per_v_um) || kappa_per_v_um < 0.0) {
    throw DomainError("field-eccentricity coupling must be >= 0, got " +
                      std::to_string(kappa_per_v_um));
  }
}

double kepler_time_fraction(double theta, double eccentricity) {
  check_eccentricity(eccentricity);
  const double th = wrap_angle(theta);
  // theta/2 in [0, pi) keeps sin(theta/2) >= 0, so atan2 lands in [0, pi]
  // and E is already in [0, 2pi): no branch cut to patch.
  const double e = eccentricity;
  const double big_e = 2.0 * std::atan2(std::sqrt(1.0 - e) * std::sin(0.5 * th),
                                        std::sqrt(1.0 + e) * std::cos(0.5 * th));
  return (big_e - e * std::sin(big_e)) / kTwoPi;
}

double orbit_pdf(double theta, double eccentricity) {
  check_eccentricity(eccentricity);
  const double e = eccentricity;
  const double one_minus_e2 = (1.0 - e) * (1.0 + e);
  const double denom = 1.0 + e * std::cos(theta);
  return std::pow(one_minus_e2, 1.5) / (kTwoPi * denom * denom);
}

double solve_eccentric_anomaly(double mean_anomaly, double eccentricity) {
  const double e = eccentricity;
  const double m = (mean_anomaly >= 0.0 && mean_anomaly < kTwoPi)
                       ? mean_anomaly
                       : wrap_angle(mean_anomaly);
  if (m == 0.0) return 0.0;

  // f(E) = E - e sin E - m is strictly increasing (f' = 1 - e cos E > 0),
  // so [0, 2pi] brackets the root. Newton from E0 = m + e sin m, falling
  // back to bisection whenever a step would leave the bracket.
  double lo = 0.0;
  double hi = kTwoPi;
  double big_e = m + e * std::sin(m);
  for (int it = 0; it < 50; ++it) {
    const double f = big_e - e * std::sin(big_e) - m;
    if (f > 0.0) {
      hi = big_e;
    } else {
      lo = big_e;
    }
    const double fp = 1.0 - e * std::cos(big_e);
    double step = f / fp;
    double next = big_e - step;
    if (next <= lo || next >= hi) {
      next = 0.5 * (lo + hi);
      step = big_e - next;
    }
    big_e = next;
    if (std::abs(step) < 1e-12) return big_e;
  }
  throw ConvergenceError("Kepler solver failed at M=" + std::to_string(m) +
                         " e=" + std::to_string(e));
}

double sample_anomaly(double eccentricity, double uniform_draw) {
  check_eccentricity(eccentricity);
  if (!(uniform_draw >= 0.0 && uniform_draw < 1.0)) {
    throw DomainError("uniform draw must lie in [0, 1), got " +
                      std::to_string(uniform_draw));
  }
  const double e = eccentricity;
  const double big_e = solve_eccentric_anomaly(kTwoPi * uniform_draw, e);
  // Inverse of the half-angle map in kepler_time_fraction; E/2 in [0, pi)
  // keeps the result in [0, 2pi) directly.
  return 2.0 * std::atan2(std::sqrt(1.0 + e) * std::sin(0.5 * big_e),
                          std::sqrt(1.0 - e) * std::cos(0.5 * big_e));
}

double radius(double theta, const OrbitShape& shape) {
  const double e = shape.eccentricity;
  return (1.0 - e) * (1.0 + e) * shape.semimajor_angstrom /
         (1.0 + e * std::cos(theta));
}

OrbitShape apply_field(const OrbitShape& shape, const FieldPerturbation& pert,
                       bool* clamped) {
  shape.validate();
  pert.validate();
  if (clamped != nullptr) *clamped = false;

  // cos_deg is exact at the quadrant angles, so psi = 90 deg contributes a
  // true zero and the returned shape is bit-identical to the input.
  const double delta = pert.kappa_per_v_um * std::abs(pert.field_v_per_um) *
                       units::cos_deg(pert.field_angle_deg);
  OrbitShape out = shape;
  out.eccentricity = shape.eccentricity + delta;
  if (out.eccentricity < 0.0) {
    out.eccentricity = 0.0;
    if (clamped != nullptr) *clamped = true;
  } else if (out.eccentricity > kMaxEccentricity) {
    out.eccentricity = kMaxEccentricity;
    if (clamped != nullptr) *clamped = true;
  }
  return out;
}

} // namespace qpm::orbit
