#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "qpm/classical.hpp"
#include "qpm/crystal.hpp"
#include "qpm/orbit.hpp"
#include "qpm/transport.hpp"

namespace qpm::calibration {

// One refractive-index datum the shape fit has to reproduce.
struct CalibrationTarget {
  double wavelength_nm = 0.0;
  classical::Polarization polarization = classical::Polarization::X;
  double n_target = 0.0;
};

// Box bounds for (eccentricity, semimajor axis, Z). Defaults: eccentricity
// small but nonzero, semimajor bracketed by the benzene ring bond lengths,
// Z between 1 and a carbon core. A collapsed pair (min == max) pins that
// parameter.
struct ParameterBounds {
  double eccentricity_min = 0.01;
  double eccentricity_max = 0.6;
  double semimajor_min_angstrom = 1.33;
  double semimajor_max_angstrom = 1.52;
  double z_min = 1.0;
  double z_max = 6.0;

  void validate() const;
};

struct CalibrationSettings {
  std::uint64_t trials = 2000;        // per objective evaluation
  std::uint64_t final_trials = 20000; // residual re-evaluation
  std::uint64_t seed = 1;
  int max_evaluations = 500;
  double simplex_tolerance = 1e-4; // diameter in scaled coordinates
  int threads = 1;
  double homo_lumo_gap_ev = 3.0;
  std::optional<std::pair<double, double>> transparency_window_um;
  orbit::OrbitShape initial_guess{0.1, 1.0, 2.0};
};

struct CalibrationResult {
  orbit::OrbitShape shape;
  double residual_rms = 0.0; // at final_trials
  int iterations = 0;        // objective evaluations during the fit
  bool converged = false;
};

// Deterministic refractive index for one (wavelength, polarization) at the
// given shape: the same fixed-seed kernel the fit minimizes over. Exposed so
// callers can generate self-consistent synthetic targets.
double simulated_index(const orbit::OrbitShape& shape,
                       const crystal::LayerStack& stack, double wavelength_nm,
                       classical::Polarization polarization,
                       std::uint64_t seed, std::uint64_t trials, int threads = 1);

// Nelder-Mead fit of (eccentricity, semimajor, Z) to the index targets.
// The objective is evaluated with a fixed seed and trial count (common
// random numbers), so it is a smooth deterministic function and two fits
// with the same settings follow identical trajectories. Search coordinates
// are scaled to [0, 1] per parameter and folded back at the bounds
// (reflection), so every iterate honors the box.
CalibrationResult fit_shape(const std::vector<CalibrationTarget>& targets,
                            const ParameterBounds& bounds,
                            const crystal::LayerStack& stack,
                            const CalibrationSettings& settings);

struct FieldFitResult {
  double kappa_per_v_um = 0.0;
  double achieved_r_pm_per_v = 0.0;
  double holdout_field_v_per_um = 0.0;
  double holdout_delta_rad = 0.0;      // engine at the held-out field
  double holdout_predicted_rad = 0.0;  // linear model from the fitted slope
  int evaluations = 0;
};

// One-dimensional solve for the field-eccentricity coupling kappa so the
// engine's effective EO coefficient matches target_r_pm_per_v within
// tolerance_fraction. Fits on E in {0, 0.5, 1, 1.5, 2} V/um and then
// validates the linear model at the held-out E = 0.75 V/um. base.field is
// ignored except as a kappa carrier; psi_deg orients the applied field.
FieldFitResult fit_field_coupling(double target_r_pm_per_v,
                                  const transport::SimulationConfig& base,
                                  double psi_deg = 0.0,
                                  double kappa_max_per_v_um = 0.3,
                                  double tolerance_fraction = 0.05);

} // namespace qpm::calibration
