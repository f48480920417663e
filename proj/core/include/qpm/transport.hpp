#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "qpm/constants.hpp"
#include "qpm/crystal.hpp"
#include "qpm/orbit.hpp"

namespace qpm::transport {

// Incident beam. Beamwidth is the full diameter.
struct BeamSpec {
  double wavelength_nm = 0.0;
  double power_mw = 0.0;
  double beamwidth_um = 0.0;

  void validate() const; // wavelength, beamwidth > 0; power >= 0
};

struct SimulationConfig {
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  BeamSpec beam;
  crystal::LayerStack stack;
  orbit::OrbitShape shape;
  std::optional<orbit::FieldPerturbation> field;
  double homo_lumo_gap_ev = 3.0;
  // Simulation runs refuse wavelengths outside this window when it is set.
  std::optional<std::pair<double, double>> transparency_window_um;
  int threads = 1;
  PhysicalConstants constants = kCodata;

  void validate() const;
};

struct SimulationResult {
  double n_x = 0.0;
  double n_y = 0.0;
  double delta_phi_rad = 0.0;
  double tau_x_mean_s = 0.0; // mean per-layer delay magnitude
  double tau_y_mean_s = 0.0;
  double stderr_delta_phi_rad = 0.0;
  std::uint64_t trials_used = 0;
  // Shape perturbation is applied once per run, so this is 0 or 1 per run;
  // eo_response accumulates it across its per-field runs.
  std::uint64_t clamp_events = 0;
};

// Mean photon flux of the focused beam [photons s^-1 cm^-2]:
// phi = I / (h nu), I = power / (pi (beamwidth/2)^2).
double photon_flux_per_cm2_s(const BeamSpec& beam,
                             const PhysicalConstants& constants = kCodata);

// Mean time between photon interactions with one molecule of the given
// cross-section [ns].
double interaction_interval_ns(double flux_per_cm2_s,
                               double cross_section_angstrom2);

// Photon energy hc/lambda [eV], gated against the HOMO-LUMO gap. Photon
// energies at or above the gap put the model in the resonant regime it does
// not cover.
double check_nonresonant(const BeamSpec& beam, double gap_ev,
                         const PhysicalConstants& constants = kCodata);

// Delay prefactor C = sqrt(2 h nu m_e) / (K Z e^2) [s m^-2]. The per-layer
// delay is C r^2 times the quadrature projection.
double delay_prefactor_s_per_m2(double frequency_hz, double z_eff,
                                const PhysicalConstants& constants = kCodata);

// One interaction: the photon meets the pi electron at true anomaly theta.
// signed values carry the quadrature sign (cos/sin theta); tau values are
// their magnitudes and feed the index sums.
struct LayerDelay {
  double tau_x_s = 0.0;
  double tau_y_s = 0.0;
  double signed_x_s = 0.0;
  double signed_y_s = 0.0;
};

LayerDelay layer_delay(double theta, const orbit::OrbitShape& shape,
                       double frequency_hz,
                       const PhysicalConstants& constants = kCodata);

// Per-trial geometric sums over the layer stack, in m^2:
//   abs_x[t] = sum_i |cos theta_i| r_i^2     abs_y[t] likewise with sin
//   diff[t]  = sum_i (cos theta_i - sin theta_i) r_i^2
// Multiplying by the wavelength-dependent prefactor C is deferred, so one
// sampling pass serves any number of wavelengths (the draws are wavelength-
// independent). Trials write disjoint slots, so the arrays are identical for
// every worker count.
struct TrialSums {
  std::vector<double> abs_x;
  std::vector<double> abs_y;
  std::vector<double> diff;
};

TrialSums sample_trial_sums(const orbit::OrbitShape& shape, std::uint64_t seed,
                            std::uint64_t trials, long layer_count,
                            int threads);

// Fixed-order reductions of the per-trial sums (pairwise tree).
struct KernelStats {
  double mean_abs_x = 0.0; // [m^2]
  double mean_abs_y = 0.0;
  double mean_diff = 0.0;
  double stderr_diff = 0.0;
};

KernelStats reduce(const TrialSums& sums);

// Full Monte-Carlo run: nonresonance gate, one apply_field, layer sampling,
// then n = 1 + (c0/L) Sigma tau per quadrature and the signed phase
// retardation delta_phi = omega Sigma (signed_x - signed_y), trial-averaged.
SimulationResult run(const SimulationConfig& config);

// Test hook: identical pipeline but true anomalies come from the caller
// instead of the counter-based stream. Routed through layer_delay, so it
// also cross-checks the fused kernel arithmetic.
using ThetaSampler =
    std::function<double(std::uint64_t trial, std::uint64_t layer)>;

SimulationResult run_sampled(const SimulationConfig& config,
                             const ThetaSampler& sampler);

// One row of an electro-optic scan. delta_rad is the paired difference
// delta_phi(E) - delta_phi(0) under common random numbers; stderr_rad is the
// standard error of that per-trial paired difference.
struct EoPoint {
  double field_v_per_um = 0.0;
  double psi_deg = 0.0;
  double delta_phi_rad = 0.0;
  double delta_rad = 0.0;
  double stderr_rad = 0.0;
  std::uint64_t clamp_events = 0;
};

// Runs the engine at each field magnitude with identical random streams.
// fields must be non-empty and include 0.
std::vector<EoPoint> eo_response(const SimulationConfig& config,
                                 const std::vector<double>& fields_v_per_um,
                                 double psi_deg);

// Fixed field magnitude, one row per field angle, same pairing and stream
// sharing as eo_response.
std::vector<EoPoint> angle_response(const SimulationConfig& config,
                                    double field_v_per_um,
                                    const std::vector<double>& psi_degrees);

struct DispersionRow {
  double wavelength_nm = 0.0;
  double n_x = 0.0;
  double n_y = 0.0;
  double delta_phi_rad = 0.0;
  double stderr_rad = 0.0;
};

// One row per wavelength from a single sampling pass: the draws are
// wavelength-independent, so each row is bit-identical to a standalone
// run() at that wavelength with the same seed. Every wavelength is gated
// (window, resonance) before any sampling happens.
std::vector<DispersionRow> dispersion(const SimulationConfig& config,
                                      const std::vector<double>& wavelengths_nm);

// Through-origin least-squares slope of delta(E), converted to the combined
// effective EO coefficient of the retardation formula
//   delta(E) = (omega l / c) (1/2) R_eff E,
// returned in pm/V. n_x and n_y are the zero-field indices the combined
// coefficient refers to; they gate validity but do not enter the slope.
double effective_r_coefficient_pm_per_v(const std::vector<EoPoint>& response,
                                        double n_x, double n_y,
                                        const BeamSpec& beam, double length_um,
                                        const PhysicalConstants& constants = kCodata);

} // namespace qpm::transport
