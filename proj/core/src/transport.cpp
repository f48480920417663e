#include "qpm/transport.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <numbers>
#include <string>
#include <thread>

#include "qpm/common.hpp"
#include "qpm/rng.hpp"

namespace qpm::transport {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double mean_of(std::span<const double> values) {
  return rng::pairwise_sum(values) / static_cast<double>(values.size());
}

// Standard error of the mean; 0 for a single trial.
double stderr_of(std::span<const double> values, double mean) {
  const std::size_t n = values.size();
  if (n < 2) return 0.0;
  std::vector<double> sq(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double d = values[i] - mean;
    sq[i] = d * d;
  }
  const double var = rng::pairwise_sum(sq) / static_cast<double>(n - 1);
  return std::sqrt(var / static_cast<double>(n));
}

// Sequential sampling of trials [begin, end). Writes one slot per trial, so
// concurrent workers on disjoint ranges produce the same arrays as a single
// worker. Works in the eccentric anomaly throughout: with
// 1 - e cos E = (1-e^2)/(1 + e cos theta) the kernel gets
//   cos theta = (cos E - e)/(1 - e cos E)
//   sin theta = sqrt(1-e^2) sin E/(1 - e cos E)
//   r = u (1 - e cos E)
// from one sin/cos pair instead of a theta round trip.
void sample_range(const orbit::OrbitShape& shape, std::uint64_t seed,
                  std::uint64_t begin, std::uint64_t end,
                  std::uint64_t layer_count, double* abs_x, double* abs_y,
                  double* diff) {
  const double e = shape.eccentricity;
  const double u_m = shape.semimajor_angstrom * units::kAngstromToMeter;
  const double u_sq = u_m * u_m;
  const double root_one_minus_e_sq = std::sqrt((1.0 - e) * (1.0 + e));
  for (std::uint64_t t = begin; t < end; ++t) {
    double sum_abs_x = 0.0;
    double sum_abs_y = 0.0;
    double sum_diff = 0.0;
    for (std::uint64_t i = 0; i < layer_count; ++i) {
      const double s = rng::uniform_draw(seed, t, i);
      const double big_e = orbit::solve_eccentric_anomaly(kTwoPi * s, e);
      const double ce = std::cos(big_e);
      const double se = std::sin(big_e);
      const double focal = 1.0 - e * ce; // r / u
      const double cos_theta = (ce - e) / focal;
      const double sin_theta = root_one_minus_e_sq * se / focal;
      const double r_sq = u_sq * focal * focal; // [m^2]
      const double gx = cos_theta * r_sq;
      const double gy = sin_theta * r_sq;
      sum_abs_x += std::abs(gx);
      sum_abs_y += std::abs(gy);
      sum_diff += gx - gy;
    }
    abs_x[t] = sum_abs_x;
    abs_y[t] = sum_abs_y;
    diff[t] = sum_diff;
  }
}

struct DerivedScales {
  double frequency_hz = 0.0;
  double omega = 0.0;
  double prefactor = 0.0; // [s m^-2]
  double length_m = 0.0;
};

DerivedScales scales_for(const SimulationConfig& config,
                         const orbit::OrbitShape& shape) {
  DerivedScales d;
  d.frequency_hz = config.constants.c0 /
                   (config.beam.wavelength_nm * units::kNanometerToMeter);
  d.omega = kTwoPi * d.frequency_hz;
  d.prefactor =
      delay_prefactor_s_per_m2(d.frequency_hz, shape.z_eff, config.constants);
  d.length_m = config.stack.crystal_length_um * units::kMicronToMeter;
  return d;
}

// Delay sums arrive in seconds: mean per-trial totals over the stack.
SimulationResult finalize(const SimulationConfig& config,
                          const DerivedScales& scales, double mean_sum_tau_x_s,
                          double mean_sum_tau_y_s, double mean_sum_diff_s,
                          double stderr_sum_diff_s, bool clamped) {
  SimulationResult result;
  const double c0_over_l = config.constants.c0 / scales.length_m;
  result.n_x = 1.0 + c0_over_l * mean_sum_tau_x_s;
  result.n_y = 1.0 + c0_over_l * mean_sum_tau_y_s;
  result.delta_phi_rad = scales.omega * mean_sum_diff_s;
  result.stderr_delta_phi_rad = scales.omega * stderr_sum_diff_s;
  const double layers = static_cast<double>(config.stack.layer_count);
  result.tau_x_mean_s = mean_sum_tau_x_s / layers;
  result.tau_y_mean_s = mean_sum_tau_y_s / layers;
  result.trials_used = config.trials;
  result.clamp_events = clamped ? 1 : 0;
  return result;
}

orbit::OrbitShape effective_shape(const SimulationConfig& config,
                                  bool* clamped) {
  if (clamped != nullptr) *clamped = false;
  if (config.field) {
    return orbit::apply_field(config.shape, *config.field, clamped);
  }
  return config.shape;
}

} // namespace

void BeamSpec::validate() const {
  if (!std::isfinite(wavelength_nm) || wavelength_nm <= 0.0) {
    throw DomainError("beam wavelength must be positive, got " +
                      std::to_string(wavelength_nm) + " nm");
  }
  if (!std::isfinite(power_mw) || power_mw < 0.0) {
    throw DomainError("beam power must be >= 0, got " +
                      std::to_string(power_mw) + " mW");
  }
  if (!std::isfinite(beamwidth_um) || beamwidth_um <= 0.0) {
    throw DomainError("beamwidth must be positive, got " +
                      std::to_string(beamwidth_um) + " um");
  }
}

void SimulationConfig::validate() const {
  if (trials < 1) throw DomainError("trials must be >= 1");
  if (!(homo_lumo_gap_ev > 0.0)) {
    throw DomainError("HOMO-LUMO gap must be positive, got " +
                      std::to_string(homo_lumo_gap_ev) + " eV");
  }
  if (threads < 1) throw DomainError("threads must be >= 1");
  beam.validate();
  if (stack.layer_count < 1) {
    throw DomainError("layer stack is empty: zero layers");
  }
  if (!(stack.crystal_length_um > 0.0) ||
      !(stack.layer_spacing_angstrom > 0.0)) {
    throw DomainError("layer stack has non-positive geometry");
  }
  shape.validate();
  if (field) field->validate();
  if (transparency_window_um) {
    const auto& [lo, hi] = *transparency_window_um;
    if (!(lo > 0.0) || !(lo < hi)) {
      throw DomainError("transparency window must satisfy 0 < min < max");
    }
    const double lambda_um =
        beam.wavelength_nm * units::kNanometerToMeter / units::kMicronToMeter;
    if (lambda_um < lo || lambda_um > hi) {
      throw PhysicsError("wavelength " + std::to_string(beam.wavelength_nm) +
                         " nm outside transparency window [" +
                         std::to_string(lo) + ", " + std::to_string(hi) +
                         "] um");
    }
  }
}

double photon_flux_per_cm2_s(const BeamSpec& beam,
                             const PhysicalConstants& constants) {
  beam.validate();
  const double radius_m = 0.5 * beam.beamwidth_um * units::kMicronToMeter;
  const double area_m2 = std::numbers::pi * radius_m * radius_m;
  const double intensity_w_m2 = beam.power_mw * 1e-3 / area_m2;
  const double frequency_hz =
      constants.c0 / (beam.wavelength_nm * units::kNanometerToMeter);
  const double photon_energy_j = constants.h * frequency_hz;
  return intensity_w_m2 / photon_energy_j * 1e-4; // m^-2 -> cm^-2
}

double interaction_interval_ns(double flux_per_cm2_s,
                               double cross_section_angstrom2) {
  if (!(flux_per_cm2_s > 0.0)) {
    throw DomainError("flux must be positive for a finite interval");
  }
  if (!(cross_section_angstrom2 > 0.0)) {
    throw DomainError("cross-section must be positive");
  }
  const double rate_hz =
      flux_per_cm2_s * cross_section_angstrom2 * units::kAngstrom2ToCm2;
  return 1e9 / rate_hz;
}

double check_nonresonant(const BeamSpec& beam, double gap_ev,
                         const PhysicalConstants& constants) {
  beam.validate();
  if (!(gap_ev > 0.0)) {
    throw DomainError("HOMO-LUMO gap must be positive, got " +
                      std::to_string(gap_ev) + " eV");
  }
  const double lambda_m = beam.wavelength_nm * units::kNanometerToMeter;
  const double photon_ev = constants.h * constants.c0 / (lambda_m * constants.e);
  if (photon_ev >= gap_ev) {
    throw PhysicsError("resonant regime: QPM linear model invalid (photon " +
                       std::to_string(photon_ev) + " eV >= gap " +
                       std::to_string(gap_ev) + " eV)");
  }
  return photon_ev;
}

double delay_prefactor_s_per_m2(double frequency_hz, double z_eff,
                                const PhysicalConstants& constants) {
  if (!(frequency_hz > 0.0)) throw DomainError("frequency must be positive");
  if (!(z_eff > 0.0)) throw DomainError("z_eff must be positive");
  return std::sqrt(2.0 * constants.h * frequency_hz * constants.m_e) /
         (constants.K * z_eff * constants.e * constants.e);
}

LayerDelay layer_delay(double theta, const orbit::OrbitShape& shape,
                       double frequency_hz,
                       const PhysicalConstants& constants) {
  shape.validate();
  const double c_pref =
      delay_prefactor_s_per_m2(frequency_hz, shape.z_eff, constants);
  const double r_m = orbit::radius(theta, shape) * units::kAngstromToMeter;
  const double r_sq = r_m * r_m;
  LayerDelay d;
  d.signed_x_s = c_pref * std::cos(theta) * r_sq;
  d.signed_y_s = c_pref * std::sin(theta) * r_sq;
  d.tau_x_s = std::abs(d.signed_x_s);
  d.tau_y_s = std::abs(d.signed_y_s);
  return d;
}

TrialSums sample_trial_sums(const orbit::OrbitShape& shape, std::uint64_t seed,
                            std::uint64_t trials, long layer_count,
                            int threads) {
  shape.validate();
  if (trials < 1) throw DomainError("trials must be >= 1");
  if (layer_count < 1) throw DomainError("layer stack is empty: zero layers");

  TrialSums sums;
  sums.abs_x.resize(trials);
  sums.abs_y.resize(trials);
  sums.diff.resize(trials);
  const auto layers = static_cast<std::uint64_t>(layer_count);

  const std::uint64_t workers =
      std::min<std::uint64_t>(std::max(threads, 1), trials);
  if (workers == 1) {
    sample_range(shape, seed, 0, trials, layers, sums.abs_x.data(),
                 sums.abs_y.data(), sums.diff.data());
    return sums;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::uint64_t w = 0; w < workers; ++w) {
    const std::uint64_t begin = trials * w / workers;
    const std::uint64_t end = trials * (w + 1) / workers;
    pool.emplace_back(sample_range, std::cref(shape), seed, begin, end, layers,
                      sums.abs_x.data(), sums.abs_y.data(), sums.diff.data());
  }
  for (auto& worker : pool) worker.join();
  return sums;
}

KernelStats reduce(const TrialSums& sums) {
  KernelStats stats;
  stats.mean_abs_x = mean_of(sums.abs_x);
  stats.mean_abs_y = mean_of(sums.abs_y);
  stats.mean_diff = mean_of(sums.diff);
  stats.stderr_diff = stderr_of(sums.diff, stats.mean_diff);
  return stats;
}

SimulationResult run(const SimulationConfig& config) {
  config.validate();
  check_nonresonant(config.beam, config.homo_lumo_gap_ev, config.constants);
  bool clamped = false;
  const orbit::OrbitShape shape = effective_shape(config, &clamped);
  const DerivedScales scales = scales_for(config, shape);

  const TrialSums sums =
      sample_trial_sums(shape, config.seed, config.trials,
                        config.stack.layer_count, config.threads);
  const KernelStats stats = reduce(sums);
  return finalize(config, scales, scales.prefactor * stats.mean_abs_x,
                  scales.prefactor * stats.mean_abs_y,
                  scales.prefactor * stats.mean_diff,
                  scales.prefactor * stats.stderr_diff, clamped);
}

SimulationResult run_sampled(const SimulationConfig& config,
                             const ThetaSampler& sampler) {
  config.validate();
  check_nonresonant(config.beam, config.homo_lumo_gap_ev, config.constants);
  if (!sampler) throw DomainError("null theta sampler");
  bool clamped = false;
  const orbit::OrbitShape shape = effective_shape(config, &clamped);
  const DerivedScales scales = scales_for(config, shape);

  std::vector<double> sum_x(config.trials);
  std::vector<double> sum_y(config.trials);
  std::vector<double> sum_d(config.trials);
  const auto layers = static_cast<std::uint64_t>(config.stack.layer_count);
  for (std::uint64_t t = 0; t < config.trials; ++t) {
    double sx = 0.0, sy = 0.0, sd = 0.0;
    for (std::uint64_t i = 0; i < layers; ++i) {
      const LayerDelay d =
          layer_delay(sampler(t, i), shape, scales.frequency_hz,
                      config.constants);
      sx += d.tau_x_s;
      sy += d.tau_y_s;
      sd += d.signed_x_s - d.signed_y_s;
    }
    sum_x[t] = sx;
    sum_y[t] = sy;
    sum_d[t] = sd;
  }
  const double mean_x = mean_of(sum_x);
  const double mean_y = mean_of(sum_y);
  const double mean_d = mean_of(sum_d);
  return finalize(config, scales, mean_x, mean_y, mean_d,
                  stderr_of(sum_d, mean_d), clamped);
}

namespace {

// Shared engine for eo_response and angle_response: one (field, psi) pair
// per row, all rows on the same counter-based stream. Pairs that land on
// the same perturbed eccentricity share one sampling pass, including the
// unperturbed reference every delta is paired against.
std::vector<EoPoint> scan_pairs(
    const SimulationConfig& config,
    const std::vector<std::pair<double, double>>& field_psi_pairs) {
  SimulationConfig base = config;
  base.field.reset();
  base.validate();
  check_nonresonant(base.beam, base.homo_lumo_gap_ev, base.constants);
  const double kappa = config.field ? config.field->kappa_per_v_um : 0.0;

  std::map<double, std::shared_ptr<const TrialSums>> cache;
  const auto sums_for = [&](const orbit::OrbitShape& shape) {
    auto it = cache.find(shape.eccentricity);
    if (it == cache.end()) {
      it = cache
               .emplace(shape.eccentricity,
                        std::make_shared<const TrialSums>(sample_trial_sums(
                            shape, base.seed, base.trials,
                            base.stack.layer_count, base.threads)))
               .first;
    }
    return it->second;
  };

  const DerivedScales scales = scales_for(base, base.shape);
  // Match finalize(): scale the second-level sums by the prefactor first,
  // then by omega, so a zero-field row is bit-identical to run().
  const auto to_rad = [&scales](double sum_s) {
    return scales.omega * (scales.prefactor * sum_s);
  };
  const auto zero_sums = sums_for(base.shape);

  std::vector<EoPoint> rows;
  rows.reserve(field_psi_pairs.size());
  std::vector<double> paired(base.trials);
  for (const auto& [field, psi_deg] : field_psi_pairs) {
    orbit::FieldPerturbation pert{field, psi_deg, kappa};
    bool clamped = false;
    const orbit::OrbitShape shape =
        orbit::apply_field(base.shape, pert, &clamped);
    const auto sums = sums_for(shape);

    for (std::uint64_t t = 0; t < base.trials; ++t) {
      paired[t] = sums->diff[t] - zero_sums->diff[t];
    }
    const double mean_paired = mean_of(paired);

    EoPoint row;
    row.field_v_per_um = field;
    row.psi_deg = psi_deg;
    row.delta_phi_rad = to_rad(mean_of(sums->diff));
    row.delta_rad = to_rad(mean_paired);
    row.stderr_rad = to_rad(stderr_of(paired, mean_paired));
    row.clamp_events = clamped ? 1 : 0;
    rows.push_back(row);
  }
  return rows;
}

} // namespace

std::vector<EoPoint> eo_response(const SimulationConfig& config,
                                 const std::vector<double>& fields_v_per_um,
                                 double psi_deg) {
  if (fields_v_per_um.empty()) {
    throw DomainError("eo_response needs a non-empty field list");
  }
  if (std::find(fields_v_per_um.begin(), fields_v_per_um.end(), 0.0) ==
      fields_v_per_um.end()) {
    throw DomainError("eo_response field list must include 0");
  }
  std::vector<std::pair<double, double>> pairs;
  pairs.reserve(fields_v_per_um.size());
  for (double field : fields_v_per_um) pairs.emplace_back(field, psi_deg);
  return scan_pairs(config, pairs);
}

std::vector<EoPoint> angle_response(const SimulationConfig& config,
                                    double field_v_per_um,
                                    const std::vector<double>& psi_degrees) {
  if (!(field_v_per_um > 0.0)) {
    throw DomainError("angle_response needs a positive field");
  }
  if (psi_degrees.empty()) {
    throw DomainError("angle_response needs a non-empty angle list");
  }
  std::vector<std::pair<double, double>> pairs;
  pairs.reserve(psi_degrees.size());
  for (double psi : psi_degrees) pairs.emplace_back(field_v_per_um, psi);
  return scan_pairs(config, pairs);
}

std::vector<DispersionRow> dispersion(const SimulationConfig& config,
                                      const std::vector<double>& wavelengths_nm) {
  if (wavelengths_nm.empty()) {
    throw DomainError("dispersion needs a non-empty wavelength list");
  }
  // Gate every wavelength before sampling so a bad range cannot leave a
  // partial scan behind.
  for (double wavelength : wavelengths_nm) {
    SimulationConfig probe = config;
    probe.beam.wavelength_nm = wavelength;
    probe.validate();
    check_nonresonant(probe.beam, probe.homo_lumo_gap_ev, probe.constants);
  }

  bool clamped = false;
  const orbit::OrbitShape shape = effective_shape(config, &clamped);
  const TrialSums sums =
      sample_trial_sums(shape, config.seed, config.trials,
                        config.stack.layer_count, config.threads);
  const KernelStats stats = reduce(sums);

  std::vector<DispersionRow> rows;
  rows.reserve(wavelengths_nm.size());
  for (double wavelength : wavelengths_nm) {
    SimulationConfig at = config;
    at.beam.wavelength_nm = wavelength;
    const DerivedScales scales = scales_for(at, shape);
    const SimulationResult result =
        finalize(at, scales, scales.prefactor * stats.mean_abs_x,
                 scales.prefactor * stats.mean_abs_y,
                 scales.prefactor * stats.mean_diff,
                 scales.prefactor * stats.stderr_diff, clamped);
    rows.push_back(DispersionRow{wavelength, result.n_x, result.n_y,
                                 result.delta_phi_rad,
                                 result.stderr_delta_phi_rad});
  }
  return rows;
}

double effective_r_coefficient_pm_per_v(const std::vector<EoPoint>& response,
                                        double n_x, double n_y,
                                        const BeamSpec& beam, double length_um,
                                        const PhysicalConstants& constants) {
  if (response.size() < 2) {
    throw DomainError("effective_r_coefficient needs at least 2 field points");
  }
  const double first = response.front().field_v_per_um;
  const bool degenerate =
      std::all_of(response.begin(), response.end(), [&](const EoPoint& p) {
        return p.field_v_per_um == first;
      });
  if (degenerate) {
    throw DomainError("degenerate fit: all field values equal");
  }
  if (!(n_x >= 1.0) || !(n_y >= 1.0)) {
    throw DomainError("refractive indices must be >= 1");
  }
  beam.validate();
  if (!(length_um > 0.0)) throw DomainError("length must be positive");

  double sxx = 0.0;
  double sxy = 0.0;
  for (const EoPoint& p : response) {
    const double e_v_per_m = p.field_v_per_um * units::kVPerMicronToVPerMeter;
    sxx += e_v_per_m * e_v_per_m;
    sxy += e_v_per_m * p.delta_rad;
  }
  const double slope = sxy / sxx; // rad per (V/m)
  const double lambda_m = beam.wavelength_nm * units::kNanometerToMeter;
  const double omega = kTwoPi * constants.c0 / lambda_m;
  const double length_m = length_um * units::kMicronToMeter;
  const double r_m_per_v = std::abs(slope) * 2.0 * constants.c0 /
                           (omega * length_m);
  return r_m_per_v / units::kPmPerVToMPerV;
}

} // namespace qpm::transport
