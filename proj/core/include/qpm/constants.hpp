#pragma once

#include <cmath>
#include <numbers>

namespace qpm {

// Fundamental constants, CODATA 2018 (SI exact where the 2019 redefinition
// fixed them). All SI units.
struct PhysicalConstants {
  double h = 6.62607015e-34;      // Planck constant [J s]
  double m_e = 9.1093837015e-31;  // electron rest mass [kg]
  double e = 1.602176634e-19;     // elementary charge [C]
  double K = 8.9875517923e9;      // Coulomb constant 1/(4 pi eps0) [N m^2 C^-2]
  double c0 = 2.99792458e8;       // vacuum light speed [m s^-1]
};

inline constexpr PhysicalConstants kCodata{};

namespace units {

inline constexpr double kAngstromToMeter = 1e-10;
inline constexpr double kMicronToMeter = 1e-6;
inline constexpr double kNanometerToMeter = 1e-9;
inline constexpr double kAngstrom2ToCm2 = 1e-16;
inline constexpr double kPmPerVToMPerV = 1e-12;
inline constexpr double kVPerMicronToVPerMeter = 1e6;

// Single degree->radian conversion point. Angles cross module boundaries in
// degrees and become radians here and nowhere else.
inline double to_radians(double degrees) {
  return degrees * std::numbers::pi / 180.0;
}

// Cosine of an angle given in degrees, exact on quadrant boundaries:
// cos_deg(90) == 0 and cos_deg(180 - psi) == -cos_deg(psi) hold bit-exactly.
// Perpendicular-field no-ops and the psi <-> 180-psi antisymmetry rely on it.
inline double cos_deg(double degrees) {
  double d = std::fmod(degrees, 360.0);
  if (d < 0.0) d += 360.0;
  if (d == 0.0) return 1.0;
  if (d == 90.0 || d == 270.0) return 0.0;
  if (d == 180.0) return -1.0;
  if (d < 90.0) return std::cos(units::to_radians(d));
  if (d < 180.0) return -std::cos(units::to_radians(180.0 - d));
  if (d < 270.0) return -std::cos(units::to_radians(d - 180.0));
  return std::cos(units::to_radians(360.0 - d));
}

} // namespace units
} // namespace qpm
