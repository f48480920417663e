#include "qpm/calibration.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <string>

#include "qpm/common.hpp"
#include "qpm/rng.hpp"

namespace qpm::calibration {

namespace {

double mean_of(std::span<const double> values) {
  return rng::pairwise_sum(values) / static_cast<double>(values.size());
}

// Tent fold of an unbounded search coordinate into [0, 1]: continuous,
// gradient-preserving up to sign, so a Nelder-Mead step that crosses a bound
// reenters the box as a reflection.
double fold_unit(double y) {
  double z = std::fmod(y, 2.0);
  if (z < 0.0) z += 2.0;
  return z <= 1.0 ? z : 2.0 - z;
}

using Vec3 = std::array<double, 3>;

struct Box {
  Vec3 lo;
  Vec3 hi;

  Vec3 params_at(const Vec3& y) const {
    Vec3 p;
    for (int k = 0; k < 3; ++k) {
      p[k] = (hi[k] > lo[k]) ? lo[k] + fold_unit(y[k]) * (hi[k] - lo[k])
                             : lo[k];
    }
    return p;
  }
};

orbit::OrbitShape shape_from(const Vec3& p) {
  return orbit::OrbitShape{p[0], p[1], p[2]};
}

// RMS index misfit for one candidate shape. One sampling pass serves every
// target: the per-trial sums are wavelength-independent, and both
// polarizations come from the same arrays.
double objective_rms(const orbit::OrbitShape& shape,
                     const std::vector<CalibrationTarget>& targets,
                     const crystal::LayerStack& stack,
                     const CalibrationSettings& settings,
                     std::uint64_t trials) {
  const transport::TrialSums sums = transport::sample_trial_sums(
      shape, settings.seed, trials, stack.layer_count, settings.threads);
  const double mean_x = mean_of(sums.abs_x);
  const double mean_y = mean_of(sums.abs_y);
  const double c0_over_l =
      kCodata.c0 / (stack.crystal_length_um * units::kMicronToMeter);

  double ss = 0.0;
  for (const CalibrationTarget& target : targets) {
    const double nu =
        kCodata.c0 / (target.wavelength_nm * units::kNanometerToMeter);
    const double pref =
        transport::delay_prefactor_s_per_m2(nu, shape.z_eff, kCodata);
    const double mean =
        (target.polarization == classical::Polarization::X) ? mean_x : mean_y;
    const double n = 1.0 + c0_over_l * pref * mean;
    const double d = n - target.n_target;
    ss += d * d;
  }
  return std::sqrt(ss / static_cast<double>(targets.size()));
}

void check_targets(const std::vector<CalibrationTarget>& targets,
                   const CalibrationSettings& settings) {
  for (const CalibrationTarget& target : targets) {
    if (!(target.wavelength_nm > 0.0)) {
      throw DomainError("target wavelength must be positive");
    }
    if (!(target.n_target > 1.0)) {
      throw DomainError("target index must exceed 1, got " +
                        std::to_string(target.n_target));
    }
    if (settings.transparency_window_um) {
      const auto& [lo, hi] = *settings.transparency_window_um;
      const double lambda_um = target.wavelength_nm * 1e-3;
      if (lambda_um < lo || lambda_um > hi) {
        throw PhysicsError("target wavelength " +
                           std::to_string(target.wavelength_nm) +
                           " nm outside transparency window");
      }
    }
    // Resonance gate applies to calibration runs as much as forward runs.
    transport::check_nonresonant(
        transport::BeamSpec{target.wavelength_nm, 0.0, 1.0},
        settings.homo_lumo_gap_ev);
  }
}

} // namespace

void ParameterBounds::validate() const {
  if (!(eccentricity_min >= 0.0) || !(eccentricity_min <= eccentricity_max) ||
      !(eccentricity_max <= orbit::kMaxEccentricity)) {
    throw DomainError("eccentricity bounds must satisfy 0 <= min <= max <= 0.95");
  }
  if (!(semimajor_min_angstrom > 0.0) ||
      !(semimajor_min_angstrom <= semimajor_max_angstrom)) {
    throw DomainError("semimajor bounds must satisfy 0 < min <= max");
  }
  if (!(z_min > 0.0) || !(z_min <= z_max)) {
    throw DomainError("Z bounds must satisfy 0 < min <= max");
  }
}

double simulated_index(const orbit::OrbitShape& shape,
                       const crystal::LayerStack& stack, double wavelength_nm,
                       classical::Polarization polarization,
                       std::uint64_t seed, std::uint64_t trials, int threads) {
  if (!(wavelength_nm > 0.0)) throw DomainError("wavelength must be positive");
  const transport::TrialSums sums = transport::sample_trial_sums(
      shape, seed, trials, stack.layer_count, threads);
  const double mean = (polarization == classical::Polarization::X)
                          ? mean_of(sums.abs_x)
                          : mean_of(sums.abs_y);
  const double nu = kCodata.c0 / (wavelength_nm * units::kNanometerToMeter);
  const double pref =
      transport::delay_prefactor_s_per_m2(nu, shape.z_eff, kCodata);
  const double c0_over_l =
      kCodata.c0 / (stack.crystal_length_um * units::kMicronToMeter);
  return 1.0 + c0_over_l * pref * mean;
}

CalibrationResult fit_shape(const std::vector<CalibrationTarget>& targets,
                            const ParameterBounds& bounds,
                            const crystal::LayerStack& stack,
                            const CalibrationSettings& settings) {
  if (targets.size() < 3) {
    throw DomainError("fit_shape needs at least 3 targets, got " +
                      std::to_string(targets.size()));
  }
  bounds.validate();
  if (stack.layer_count < 1) throw DomainError("layer stack is empty");
  if (settings.trials < 1 || settings.final_trials < 1) {
    throw DomainError("calibration trial counts must be >= 1");
  }
  if (settings.max_evaluations < 4) {
    throw DomainError("max_evaluations must allow an initial simplex");
  }
  if (!(settings.simplex_tolerance > 0.0)) {
    throw DomainError("simplex tolerance must be positive");
  }
  settings.initial_guess.validate();
  check_targets(targets, settings);

  const Box box{{bounds.eccentricity_min, bounds.semimajor_min_angstrom,
                 bounds.z_min},
                {bounds.eccentricity_max, bounds.semimajor_max_angstrom,
                 bounds.z_max}};
  std::vector<int> free_dims;
  for (int k = 0; k < 3; ++k) {
    if (box.hi[k] > box.lo[k]) free_dims.push_back(k);
  }

  int evals = 0;
  const auto evaluate = [&](const Vec3& y, std::uint64_t trials) {
    ++evals;
    return objective_rms(shape_from(box.params_at(y)), targets, stack,
                         settings, trials);
  };

  Vec3 y0{0.0, 0.0, 0.0};
  const Vec3 guess{settings.initial_guess.eccentricity,
                   settings.initial_guess.semimajor_angstrom,
                   settings.initial_guess.z_eff};
  for (int k : free_dims) {
    y0[k] = (guess[k] - box.lo[k]) / (box.hi[k] - box.lo[k]);
  }

  CalibrationResult result;
  if (free_dims.empty()) {
    // Fully collapsed bounds: the search space is one point.
    evaluate(y0, settings.trials);
    result.shape = shape_from(box.params_at(y0));
    result.residual_rms = objective_rms(result.shape, targets, stack, settings,
                                        settings.final_trials);
    result.iterations = evals;
    result.converged = true;
    return result;
  }

  const int dim = static_cast<int>(free_dims.size());
  std::vector<Vec3> vertex(dim + 1, y0);
  std::vector<double> value(dim + 1);
  for (int k = 0; k < dim; ++k) vertex[k + 1][free_dims[k]] += 0.3;
  for (int i = 0; i <= dim; ++i) value[i] = evaluate(vertex[i], settings.trials);

  const auto diameter = [&]() {
    double diam = 0.0;
    for (int i = 0; i <= dim; ++i) {
      for (int j = i + 1; j <= dim; ++j) {
        for (int k : free_dims) {
          diam = std::max(diam, std::abs(vertex[i][k] - vertex[j][k]));
        }
      }
    }
    return diam;
  };
  const auto blend = [&](const Vec3& a, const Vec3& b, double w) {
    // a + w (a - b), component-wise
    Vec3 out = a;
    for (int k : free_dims) out[k] = a[k] + w * (a[k] - b[k]);
    return out;
  };

  bool converged = false;
  while (true) {
    std::vector<int> order(dim + 1);
    for (int i = 0; i <= dim; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return value[a] < value[b]; });
    const int best = order[0];
    const int second_worst = order[dim - 1];
    const int worst = order[dim];

    if (value[best] == 0.0 || diameter() < settings.simplex_tolerance) {
      converged = true;
      break;
    }
    if (evals >= settings.max_evaluations) break;

    Vec3 centroid{0.0, 0.0, 0.0};
    for (int i = 0; i <= dim; ++i) {
      if (i == worst) continue;
      for (int k : free_dims) centroid[k] += vertex[i][k] / dim;
    }

    const Vec3 reflected = blend(centroid, vertex[worst], 1.0);
    const double f_reflected = evaluate(reflected, settings.trials);
    if (f_reflected < value[best]) {
      const Vec3 expanded = blend(centroid, vertex[worst], 2.0);
      const double f_expanded = evaluate(expanded, settings.trials);
      if (f_expanded < f_reflected) {
        vertex[worst] = expanded;
        value[worst] = f_expanded;
      } else {
        vertex[worst] = reflected;
        value[worst] = f_reflected;
      }
      continue;
    }
    if (f_reflected < value[second_worst]) {
      vertex[worst] = reflected;
      value[worst] = f_reflected;
      continue;
    }
    if (f_reflected < value[worst]) {
      const Vec3 contracted = blend(centroid, vertex[worst], 0.5);
      const double f_contracted = evaluate(contracted, settings.trials);
      if (f_contracted <= f_reflected) {
        vertex[worst] = contracted;
        value[worst] = f_contracted;
        continue;
      }
    } else {
      const Vec3 contracted = blend(centroid, vertex[worst], -0.5);
      const double f_contracted = evaluate(contracted, settings.trials);
      if (f_contracted < value[worst]) {
        vertex[worst] = contracted;
        value[worst] = f_contracted;
        continue;
      }
    }
    // Shrink toward the best vertex.
    for (int i = 0; i <= dim; ++i) {
      if (i == best) continue;
      for (int k : free_dims) {
        vertex[i][k] = vertex[best][k] + 0.5 * (vertex[i][k] - vertex[best][k]);
      }
      value[i] = evaluate(vertex[i], settings.trials);
    }
  }

  int best = 0;
  for (int i = 1; i <= dim; ++i) {
    if (value[i] < value[best]) best = i;
  }
  result.shape = shape_from(box.params_at(vertex[best]));
  result.residual_rms = objective_rms(result.shape, targets, stack, settings,
                                      settings.final_trials);
  result.iterations = evals;
  result.converged = converged;
  return result;
}

FieldFitResult fit_field_coupling(double target_r_pm_per_v,
                                  const transport::SimulationConfig& base,
                                  double psi_deg, double kappa_max_per_v_um,
                                  double tolerance_fraction) {
  if (!(target_r_pm_per_v >= 0.0)) {
    throw DomainError("target EO coefficient must be >= 0");
  }
  if (!(kappa_max_per_v_um > 0.0)) throw DomainError("kappa_max must be > 0");
  if (!(tolerance_fraction > 0.0)) throw DomainError("tolerance must be > 0");

  transport::SimulationConfig cfg = base;
  cfg.field.reset();
  cfg.validate();

  FieldFitResult out;
  out.holdout_field_v_per_um = 0.75;
  if (target_r_pm_per_v == 0.0) return out;

  const transport::SimulationResult zero_run = transport::run(cfg);
  const std::vector<double> fit_fields{0.0, 0.5, 1.0, 1.5, 2.0};

  int evals = 0;
  double last_slope = 0.0; // rad per (V/m), signed
  const auto response_at = [&](double kappa) {
    ++evals;
    transport::SimulationConfig scan = cfg;
    scan.field = orbit::FieldPerturbation{0.0, psi_deg, kappa};
    const auto rows = transport::eo_response(scan, fit_fields, psi_deg);
    double sxx = 0.0, sxy = 0.0;
    for (const auto& row : rows) {
      const double e = row.field_v_per_um * units::kVPerMicronToVPerMeter;
      sxx += e * e;
      sxy += e * row.delta_rad;
    }
    last_slope = sxy / sxx;
    return transport::effective_r_coefficient_pm_per_v(
        rows, zero_run.n_x, zero_run.n_y, cfg.beam,
        cfg.stack.crystal_length_um, cfg.constants);
  };

  const auto within = [&](double r) {
    return std::abs(r - target_r_pm_per_v) <=
           tolerance_fraction * target_r_pm_per_v;
  };

  // R(0) = 0 exactly (paired difference of identical streams), so the
  // origin anchors the first secant for free. R is close to linear in
  // kappa, which makes the secant essentially one-shot.
  double ka = 0.0, ra = 0.0;
  double kb = std::min(1e-4, 0.5 * kappa_max_per_v_um);
  double rb = response_at(kb);
  double kappa = kb, r = rb;

  bool solved = within(rb);
  for (int it = 0; it < 30 && !solved; ++it) {
    if (rb == ra) {
      // Flat response (e.g. perpendicular field): only escalation is left.
      if (kb >= kappa_max_per_v_um) {
        throw ConvergenceError(
            "target R=" + std::to_string(target_r_pm_per_v) +
            " pm/V unreachable: R(" + std::to_string(kb) + ")=" +
            std::to_string(rb) + ", R(" + std::to_string(ka) + ")=" +
            std::to_string(ra));
      }
      kappa = std::min(kappa_max_per_v_um, 4.0 * kb);
    } else {
      kappa = kb + (target_r_pm_per_v - rb) * (kb - ka) / (rb - ra);
      if (!(kappa > 0.0)) kappa = 0.5 * kb;
      if (kappa > kappa_max_per_v_um) kappa = kappa_max_per_v_um;
    }
    r = response_at(kappa);
    if (within(r)) {
      solved = true;
      break;
    }
    if (kappa >= kappa_max_per_v_um && r < target_r_pm_per_v) {
      throw ConvergenceError(
          "target R=" + std::to_string(target_r_pm_per_v) +
          " pm/V unreachable within kappa [0, " +
          std::to_string(kappa_max_per_v_um) + "]: R(max)=" +
          std::to_string(r) + " pm/V");
    }
    ka = kb;
    ra = rb;
    kb = kappa;
    rb = r;
  }
  if (!solved && within(rb)) {
    kappa = kb;
    r = rb;
    solved = true;
  }
  if (!solved) {
    throw ConvergenceError("kappa fit did not converge in " +
                           std::to_string(evals) + " evaluations");
  }

  out.kappa_per_v_um = kappa;
  out.achieved_r_pm_per_v = r;
  out.evaluations = evals;

  // Held-out linearity check at a field the fit never saw.
  transport::SimulationConfig holdout = cfg;
  holdout.field = orbit::FieldPerturbation{0.0, psi_deg, kappa};
  const auto rows = transport::eo_response(
      holdout, {0.0, out.holdout_field_v_per_um}, psi_deg);
  out.holdout_delta_rad = rows[1].delta_rad;
  out.holdout_predicted_rad = last_slope * out.holdout_field_v_per_um *
                              units::kVPerMicronToVPerMeter;
  return out;
}

} // namespace qpm::calibration
