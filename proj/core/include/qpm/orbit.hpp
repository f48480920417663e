#pragma once

namespace qpm::orbit {

// Guard below the parabolic limit: the position PDF and the anomaly solver
// degrade as eccentricity -> 1; the physical regime sits far inside.
inline constexpr double kMaxEccentricity = 0.95;

// The delocalized pi-electron ellipse: eccentricity, semimajor axis u [A]
// and effective positive charge Z at the occupied focus.
struct OrbitShape {
  double eccentricity = 0.0;
  double semimajor_angstrom = 0.0;
  double z_eff = 0.0;

  void validate() const;
};

// A transverse applied field: magnitude [V/um], angle psi between the field
// and the molecular charge-transfer axis [deg], and the linear coupling
// kappa from field to eccentricity change [per V/um].
struct FieldPerturbation {
  double field_v_per_um = 0.0;
  double field_angle_deg = 0.0;
  double kappa_per_v_um = 0.0;

  void validate() const;
};

// Fraction of the orbital period t/T spent sweeping from perigee to true
// anomaly theta. Continuous and strictly increasing on [0, 2pi); theta is
// reduced modulo 2pi. Evaluated through the eccentric anomaly
//   E = 2 atan2(sqrt(1-e) sin(theta/2), sqrt(1+e) cos(theta/2)),
//   t/T = (E - e sin E) / 2pi,
// which equals the principal-branch arctan form on (0, pi) but stays
// monotone across theta = pi.
double kepler_time_fraction(double theta, double eccentricity);

// Probability density of the true anomaly, d(t/T)/dtheta:
//   p(theta) = (1-e^2)^{3/2} / (2pi (1 + e cos theta)^2)   [1/rad]
// Maximal at apogee (theta = pi), minimal at perigee.
double orbit_pdf(double theta, double eccentricity);

// Inverse-transform sample: solves t/T = uniform_draw for theta via Kepler's
// equation M = E - e sin E (damped Newton, |dE| < 1e-12, <= 50 iterations,
// bisection fallback). Deterministic in (eccentricity, uniform_draw).
double sample_anomaly(double eccentricity, double uniform_draw);

// Solves M = E - e sin E for the eccentric anomaly, M in [0, 2pi).
// Exposed for the transport kernel, which works in E throughout.
double solve_eccentric_anomaly(double mean_anomaly, double eccentricity);

// Conic radius r = (1-e^2) u / (1 + e cos theta) [A].
double radius(double theta, const OrbitShape& shape);

// Field-perturbed orbit: e' = clamp(e + kappa |E| cos psi, 0, eps_max);
// u and Z unchanged. psi = 90 deg leaves the shape bit-identical. If
// clamping occurred and `clamped` is non-null it is set to true.
OrbitShape apply_field(const OrbitShape& shape, const FieldPerturbation& pert,
                       bool* clamped = nullptr);

} // namespace qpm::orbit
