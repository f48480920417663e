#include "qpm/classical.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "qpm/common.hpp"
#include "qpm/constants.hpp"

namespace qpm::classical {

namespace {

void check_finite(const std::optional<double>& r, const char* name) {
  if (r && !std::isfinite(*r)) {
    throw DomainError(std::string("eo coefficient ") + name + " not finite");
  }
}

double require(const std::optional<double>& r, const char* name) {
  if (!r) {
    throw DomainError(std::string("material lacks eo coefficient ") + name);
  }
  return *r;
}

// omega l / c = 2 pi l / lambda, both lengths in meters.
double phase_factor(double length_um, double wavelength_nm) {
  if (!(length_um > 0.0)) {
    throw DomainError("crystal length must be positive, got " +
                      std::to_string(length_um) + " um");
  }
  if (!(wavelength_nm > 0.0)) {
    throw DomainError("wavelength must be positive, got " +
                      std::to_string(wavelength_nm) + " nm");
  }
  return 2.0 * std::numbers::pi * (length_um * units::kMicronToMeter) /
         (wavelength_nm * units::kNanometerToMeter);
}

double sellmeier_n2(const SellmeierCoefficients& coeff, double lambda_um) {
  const double s = lambda_um * lambda_um;
  return coeff.a + coeff.b * s / (s - coeff.c);
}

} // namespace

void IndexEllipsoid::validate() const {
  if (!(n_x >= 1.0) || !(n_y >= 1.0) || !(n_z >= 1.0)) {
    throw DomainError("principal indices must all be >= 1");
  }
  check_finite(eo.r11, "r11");
  check_finite(eo.r12, "r12");
  check_finite(eo.r21, "r21");
  check_finite(eo.r22, "r22");
  check_finite(eo.r31, "r31");
  check_finite(eo.r51, "r51");
  check_finite(eo.r61, "r61");
}

void SellmeierSet::validate() const {
  if (!(window_min_um > 0.0) || !(window_min_um < window_max_um)) {
    throw DomainError("sellmeier validity window must satisfy 0 < min < max");
  }
  const double min_sq = window_min_um * window_min_um;
  for (const auto* coeff : {&x, &y}) {
    if (!(coeff->c < min_sq)) {
      throw DomainError("sellmeier pole inside validity window (c >= min^2)");
    }
    if (!(sellmeier_n2(*coeff, window_min_um) > 1.0) ||
        !(sellmeier_n2(*coeff, window_max_um) > 1.0)) {
      throw DomainError("sellmeier n^2 must exceed 1 across the window");
    }
  }
}

PerturbedIndices perturbed_indices_npp(const IndexEllipsoid& ell,
                                       double e_y_v_per_um) {
  ell.validate();
  const double r12 = require(ell.eo.r12, "r12") * units::kPmPerVToMPerV;
  const double r22 = require(ell.eo.r22, "r22") * units::kPmPerVToMPerV;
  const double e_y = e_y_v_per_um * units::kVPerMicronToVPerMeter;
  PerturbedIndices out;
  out.n_x = ell.n_x - 0.5 * ell.n_x * ell.n_x * ell.n_x * r12 * e_y;
  out.n_y = ell.n_y - 0.5 * ell.n_y * ell.n_y * ell.n_y * r22 * e_y;
  return out;
}

double retardation_npp(const IndexEllipsoid& ell, double e_y_v_per_um,
                       double length_um, double wavelength_nm) {
  ell.validate();
  const double r12 = require(ell.eo.r12, "r12") * units::kPmPerVToMPerV;
  const double r22 = require(ell.eo.r22, "r22") * units::kPmPerVToMPerV;
  const double e_y = e_y_v_per_um * units::kVPerMicronToVPerMeter;
  const double bracket =
      ell.n_y - ell.n_x -
      0.5 * (ell.n_y * ell.n_y * ell.n_y * r22 -
             ell.n_x * ell.n_x * ell.n_x * r12) * e_y;
  return phase_factor(length_um, wavelength_nm) * bracket;
}

double retardation_mna(const IndexEllipsoid& ell, double e_x_v_per_um,
                       double length_um, double wavelength_nm) {
  ell.validate();
  const double r11 = require(ell.eo.r11, "r11") * units::kPmPerVToMPerV;
  const double r21 = require(ell.eo.r21, "r21") * units::kPmPerVToMPerV;
  const double e_x = e_x_v_per_um * units::kVPerMicronToVPerMeter;
  const double bracket =
      ell.n_y - ell.n_x -
      0.5 * (ell.n_x * ell.n_x * ell.n_x * r11 -
             ell.n_y * ell.n_y * ell.n_y * r21) * e_x;
  return phase_factor(length_um, wavelength_nm) * bracket;
}

double sellmeier_n(const SellmeierSet& set, double wavelength_nm,
                   Polarization pol) {
  set.validate();
  const double lambda_um =
      wavelength_nm * units::kNanometerToMeter / units::kMicronToMeter;
  if (lambda_um < set.window_min_um || lambda_um > set.window_max_um) {
    throw DomainError("extrapolation refused: " + std::to_string(wavelength_nm) +
                      " nm outside sellmeier window [" +
                      std::to_string(set.window_min_um) + ", " +
                      std::to_string(set.window_max_um) + "] um");
  }
  const auto& coeff = (pol == Polarization::X) ? set.x : set.y;
  return std::sqrt(sellmeier_n2(coeff, lambda_um));
}

} // namespace qpm::classical
