#pragma once

#include <optional>

namespace qpm::classical {

enum class Polarization { X, Y };

// Linear electro-optic coefficients [pm/V]. Materials carry different
// subsets: NPP uses r12/r22 (and lists r61 without consuming it), MNA uses
// r11/r21/r31/r51.
struct EoCoefficients {
  std::optional<double> r11;
  std::optional<double> r12;
  std::optional<double> r21;
  std::optional<double> r22;
  std::optional<double> r31;
  std::optional<double> r51;
  std::optional<double> r61;
};

struct IndexEllipsoid {
  double n_x = 1.0;
  double n_y = 1.0;
  double n_z = 1.0;
  EoCoefficients eo;

  void validate() const;
};

// One-oscillator Sellmeier: n^2(lambda) = a + b lambda^2 / (lambda^2 - c),
// lambda in um.
struct SellmeierCoefficients {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
};

struct SellmeierSet {
  SellmeierCoefficients x;
  SellmeierCoefficients y;
  double window_min_um = 0.0;
  double window_max_um = 0.0;

  // Requires c < window_min^2 for both polarizations (pole outside the
  // window) and n^2 > 1 across the window. With the pole excluded n^2 is
  // monotone in lambda^2, so the endpoint check covers the interior.
  void validate() const;
};

struct PerturbedIndices {
  double n_x = 0.0;
  double n_y = 0.0;
};

// Field-shifted principal indices for NPP, field along y:
//   n_x' = n_x - 1/2 n_x^3 r12 E_y,  n_y' = n_y - 1/2 n_y^3 r22 E_y.
PerturbedIndices perturbed_indices_npp(const IndexEllipsoid& ell,
                                       double e_y_v_per_um);

// Phase retardation of an NPP slab, raw radians (not reduced mod 2pi):
//   Gamma = (omega l / c) [n_y - n_x - 1/2 (n_y^3 r22 - n_x^3 r12) E_y]
double retardation_npp(const IndexEllipsoid& ell, double e_y_v_per_um,
                       double length_um, double wavelength_nm);

// MNA variant, field along x:
//   Gamma = (omega l / c) [n_y - n_x - 1/2 (n_x^3 r11 - n_y^3 r21) E_x]
double retardation_mna(const IndexEllipsoid& ell, double e_x_v_per_um,
                       double length_um, double wavelength_nm);

// Sellmeier index at a wavelength inside the validity window; refuses to
// extrapolate outside it.
double sellmeier_n(const SellmeierSet& set, double wavelength_nm,
                   Polarization pol);

} // namespace qpm::classical
