// qpm: batch front end for the photonic transport engine. Subcommands emit
// plot-ready CSV plus a JSON manifest capturing everything needed to
// reproduce the output byte-exactly.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qpm/calibration.hpp"
#include "qpm/classical.hpp"
#include "qpm/common.hpp"
#include "qpm/config.hpp"
#include "qpm/crystal.hpp"
#include "qpm/huckel.hpp"
#include "qpm/manifest.hpp"
#include "qpm/transport.hpp"

namespace {

std::string fmt_g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string join_command_line(int argc, char** argv) {
  std::string s;
  for (int i = 0; i < argc; ++i) {
    if (i > 0) s += ' ';
    s += argv[i];
  }
  return s;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw qpm::ConfigError("cannot write output file: " + path);
  out << content;
  if (!out) throw qpm::ConfigError("failed while writing: " + path);
}

std::vector<double> inclusive_range(double lo, double hi, double step,
                                    const char* what) {
  if (!(step > 0.0)) {
    throw qpm::ConfigError(std::string(what) + ": step must be positive");
  }
  if (hi < lo) {
    throw qpm::ConfigError(std::string(what) + ": max must be >= min");
  }
  std::vector<double> values;
  // Half-step slack keeps the endpoint when lo + n*step lands on it with
  // rounding noise.
  for (double v = lo; v <= hi + 0.5 * step * 1e-9; v += step) {
    values.push_back(v);
  }
  return values;
}

struct GlobalArgs {
  std::string config_path = "data/npp.cfg";
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> trials;
  std::optional<int> threads;
  std::string command_line;
};

qpm::config::ProjectConfig load_config(const GlobalArgs& args) {
  qpm::config::ProjectConfig cfg =
      qpm::config::ProjectConfig::load(args.config_path);
  if (args.seed) cfg.seed = *args.seed;
  if (args.trials) cfg.trials = *args.trials;
  if (args.threads) {
    if (*args.threads < 1) throw qpm::ConfigError("--threads must be >= 1");
    cfg.threads = *args.threads;
  }
  return cfg;
}

void emit(const GlobalArgs& args, const qpm::config::ProjectConfig& cfg,
          const std::string& out_path, const std::string& content) {
  write_text_file(out_path, content);
  qpm::manifest::RunManifest m;
  m.command_line = args.command_line;
  m.config_snapshot = cfg.snapshot();
  m.seed = cfg.seed;
  m.trials = cfg.trials;
  qpm::manifest::write(out_path, std::move(m));
}

// --- dispersion ------------------------------------------------------------

void cmd_dispersion(const GlobalArgs& args, double min_nm, double max_nm,
                    double step_nm) {
  const auto cfg = load_config(args);
  const auto wavelengths =
      inclusive_range(min_nm, max_nm, step_nm, "dispersion");
  const auto rows = qpm::transport::dispersion(cfg.simulation(), wavelengths);

  std::string csv = "wavelength_nm,n_x,n_y,delta_phi_rad,stderr_rad\n";
  for (const auto& row : rows) {
    csv += fmt_g(row.wavelength_nm) + "," + fmt_g(row.n_x) + "," +
           fmt_g(row.n_y) + "," + fmt_g(row.delta_phi_rad) + "," +
           fmt_g(row.stderr_rad) + "\n";
  }
  const std::string out = args.out.empty() ? "dispersion.csv" : args.out;
  emit(args, cfg, out, csv);
  std::cout << "dispersion: " << rows.size() << " rows -> " << out << "\n";
}

// --- eo-scan / angle-scan ---------------------------------------------------

std::string eo_rows_csv(const std::vector<qpm::transport::EoPoint>& rows) {
  std::string csv = "field_v_per_um,psi_deg,delta_phi_rad,delta_rad,stderr_rad\n";
  for (const auto& row : rows) {
    csv += fmt_g(row.field_v_per_um) + "," + fmt_g(row.psi_deg) + "," +
           fmt_g(row.delta_phi_rad) + "," + fmt_g(row.delta_rad) + "," +
           fmt_g(row.stderr_rad) + "\n";
  }
  return csv;
}

void cmd_eo_scan(const GlobalArgs& args, const std::vector<double>& fields,
                 double psi_deg, double kappa_flag) {
  auto cfg = load_config(args);
  if (kappa_flag >= 0.0) cfg.kappa_per_v_um = kappa_flag;
  auto sim = cfg.simulation();
  sim.field = qpm::orbit::FieldPerturbation{0.0, psi_deg, cfg.kappa_per_v_um};
  const auto rows = qpm::transport::eo_response(sim, fields, psi_deg);
  const std::string out = args.out.empty() ? "eo_scan.csv" : args.out;
  emit(args, cfg, out, eo_rows_csv(rows));
  std::cout << "eo-scan: " << rows.size() << " rows -> " << out << "\n";
}

void cmd_angle_scan(const GlobalArgs& args, double field, double psi_min,
                    double psi_max, double psi_step, double kappa_flag) {
  auto cfg = load_config(args);
  if (kappa_flag >= 0.0) cfg.kappa_per_v_um = kappa_flag;
  const auto psis = inclusive_range(psi_min, psi_max, psi_step, "angle-scan");
  auto sim = cfg.simulation();
  sim.field = qpm::orbit::FieldPerturbation{0.0, 0.0, cfg.kappa_per_v_um};
  const auto rows = qpm::transport::angle_response(sim, field, psis);
  const std::string out = args.out.empty() ? "angle_scan.csv" : args.out;
  emit(args, cfg, out, eo_rows_csv(rows));
  std::cout << "angle-scan: " << rows.size() << " rows -> " << out << "\n";
}

// --- calibrate ---------------------------------------------------------------

std::vector<qpm::calibration::CalibrationTarget> parse_targets_csv(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw qpm::ConfigError("cannot open targets file: " + path);
  std::vector<qpm::calibration::CalibrationTarget> targets;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line_no == 1 && line.rfind("wavelength_nm", 0) == 0) continue;
    std::istringstream row(line);
    std::string wl, pol, n;
    if (!std::getline(row, wl, ',') || !std::getline(row, pol, ',') ||
        !std::getline(row, n)) {
      throw qpm::ConfigError(path + ":" + std::to_string(line_no) +
                             ": expected wavelength_nm,polarization,n_target");
    }
    qpm::calibration::CalibrationTarget target;
    try {
      target.wavelength_nm = std::stod(wl);
      target.n_target = std::stod(n);
    } catch (const std::exception&) {
      throw qpm::ConfigError(path + ":" + std::to_string(line_no) +
                             ": malformed number");
    }
    if (pol == "x") {
      target.polarization = qpm::classical::Polarization::X;
    } else if (pol == "y") {
      target.polarization = qpm::classical::Polarization::Y;
    } else {
      throw qpm::ConfigError(path + ":" + std::to_string(line_no) +
                             ": polarization must be x or y, got '" + pol + "'");
    }
    targets.push_back(target);
  }
  return targets;
}

void cmd_calibrate(const GlobalArgs& args, const std::string& targets_path,
                   double kappa_target, double kappa_wavelength_nm,
                   double psi_deg, std::uint64_t fit_trials,
                   std::uint64_t final_trials, int max_evals,
                   const qpm::calibration::ParameterBounds& bounds,
                   const qpm::orbit::OrbitShape& init) {
  const auto cfg = load_config(args);
  const std::string out = args.out.empty() ? "calibration.txt" : args.out;

  if (kappa_target >= 0.0) {
    auto sim = cfg.simulation();
    sim.trials = fit_trials;
    if (kappa_wavelength_nm > 0.0) sim.beam.wavelength_nm = kappa_wavelength_nm;
    const auto fit =
        qpm::calibration::fit_field_coupling(kappa_target, sim, psi_deg);
    std::string text = "[result]\n";
    text += "kappa_per_v_um = " + fmt_g(fit.kappa_per_v_um) + "\n";
    text += "achieved_r_pm_per_v = " + fmt_g(fit.achieved_r_pm_per_v) + "\n";
    text += "holdout_field_v_per_um = " + fmt_g(fit.holdout_field_v_per_um) + "\n";
    text += "holdout_delta_rad = " + fmt_g(fit.holdout_delta_rad) + "\n";
    text += "holdout_predicted_rad = " + fmt_g(fit.holdout_predicted_rad) + "\n";
    text += "evaluations = " + std::to_string(fit.evaluations) + "\n";
    emit(args, cfg, out, text);
    std::cout << "kappa fit: kappa=" << fmt_g(fit.kappa_per_v_um)
              << " per V/um, R_eff=" << fmt_g(fit.achieved_r_pm_per_v)
              << " pm/V -> " << out << "\n";
    return;
  }

  if (targets_path.empty()) {
    throw qpm::ConfigError("calibrate needs --targets or --kappa-target");
  }
  const auto targets = parse_targets_csv(targets_path);
  qpm::calibration::CalibrationSettings settings;
  settings.trials = fit_trials;
  settings.final_trials = final_trials;
  settings.seed = cfg.seed;
  settings.max_evaluations = max_evals;
  settings.threads = cfg.threads;
  settings.homo_lumo_gap_ev = cfg.homo_lumo_gap_ev;
  settings.transparency_window_um = cfg.cell.transparency_window_um;
  settings.initial_guess = init;
  const auto result =
      qpm::calibration::fit_shape(targets, bounds, cfg.stack(), settings);

  std::string text = "[result]\n";
  text += "eccentricity = " + fmt_g(result.shape.eccentricity) + "\n";
  text += "semimajor_angstrom = " + fmt_g(result.shape.semimajor_angstrom) + "\n";
  text += "z_eff = " + fmt_g(result.shape.z_eff) + "\n";
  text += "residual_rms = " + fmt_g(result.residual_rms) + "\n";
  text += "iterations = " + std::to_string(result.iterations) + "\n";
  text += std::string("converged = ") + (result.converged ? "true" : "false") +
          "\n";
  emit(args, cfg, out, text);
  std::cout << "shape fit: eccentricity=" << fmt_g(result.shape.eccentricity)
            << " semimajor=" << fmt_g(result.shape.semimajor_angstrom)
            << " A, z_eff=" << fmt_g(result.shape.z_eff)
            << ", rms=" << fmt_g(result.residual_rms) << " ("
            << result.iterations << " evaluations, "
            << (result.converged ? "converged" : "not converged") << ") -> "
            << out << "\n";
}

// --- huckel -------------------------------------------------------------------

std::pair<int, int> parse_bond_token(const std::string& token,
                                     const std::string& origin) {
  const auto dash = token.find('-');
  if (dash == std::string::npos) {
    throw qpm::ConfigError(origin + ": bond must look like i-j, got '" + token +
                           "'");
  }
  try {
    return {std::stoi(token.substr(0, dash)), std::stoi(token.substr(dash + 1))};
  } catch (const std::exception&) {
    throw qpm::ConfigError(origin + ": malformed bond '" + token + "'");
  }
}

qpm::huckel::PiSystem load_pi_system(const std::string& path) {
  const auto doc = qpm::config::IniDoc::parse_file(path);
  for (const auto& [section, keys] : doc.sections) {
    if (section != "system" && section != "alpha" && section != "bond") {
      throw qpm::ConfigError(path + ": unknown section [" + section + "]");
    }
  }
  const auto sys_it = doc.sections.find("system");
  if (sys_it == doc.sections.end()) {
    throw qpm::ConfigError(path + ": missing [system] section");
  }
  const auto& sys = sys_it->second;
  const auto get = [&](const char* key) -> const std::string& {
    auto it = sys.find(key);
    if (it == sys.end()) {
      throw qpm::ConfigError(path + ": missing key system." + key);
    }
    return it->second;
  };
  for (const auto& [key, value] : sys) {
    if (key != "atoms" && key != "electrons" && key != "bonds") {
      throw qpm::ConfigError(path + ": unknown key system." + key);
    }
  }

  qpm::huckel::PiSystem system;
  try {
    system.atom_count = std::stoi(get("atoms"));
    system.electron_count = std::stoi(get("electrons"));
  } catch (const std::exception&) {
    throw qpm::ConfigError(path + ": atoms/electrons must be integers");
  }
  system.alpha_shift.assign(std::max(system.atom_count, 0), 0.0);

  std::istringstream bonds(get("bonds"));
  std::string token;
  while (std::getline(bonds, token, ',')) {
    const auto b = token.find_first_not_of(" \t");
    const auto e = token.find_last_not_of(" \t");
    if (b == std::string::npos) continue;
    system.bonds.push_back(parse_bond_token(token.substr(b, e - b + 1), path));
    system.bond_factor.push_back(1.0);
  }

  if (const auto alpha_it = doc.sections.find("alpha");
      alpha_it != doc.sections.end()) {
    for (const auto& [key, value] : alpha_it->second) {
      int atom = 0;
      double h = 0.0;
      try {
        atom = std::stoi(key);
        h = std::stod(value);
      } catch (const std::exception&) {
        throw qpm::ConfigError(path + ": alpha." + key + ": malformed entry");
      }
      if (atom < 0 || atom >= system.atom_count) {
        throw qpm::ConfigError(path + ": alpha." + key + ": atom out of range");
      }
      system.alpha_shift[atom] = h;
    }
  }
  if (const auto bond_it = doc.sections.find("bond");
      bond_it != doc.sections.end()) {
    for (const auto& [key, value] : bond_it->second) {
      const auto [i, j] = parse_bond_token(key, path);
      double k = 1.0;
      try {
        k = std::stod(value);
      } catch (const std::exception&) {
        throw qpm::ConfigError(path + ": bond." + key + ": malformed factor");
      }
      bool found = false;
      for (size_t b = 0; b < system.bonds.size(); ++b) {
        const auto& [bi, bj] = system.bonds[b];
        if ((bi == i && bj == j) || (bi == j && bj == i)) {
          system.bond_factor[b] = k;
          found = true;
          break;
        }
      }
      if (!found) {
        throw qpm::ConfigError(path + ": bond." + key +
                               ": no such bond in system.bonds");
      }
    }
  }
  return system;
}

void cmd_huckel(const GlobalArgs& args, const std::string& system_path) {
  const auto system = load_pi_system(system_path);
  const auto result = qpm::huckel::solve(system);

  std::string csv = "kind,orbital,atom,value\n";
  for (size_t k = 0; k < result.energies.size(); ++k) {
    csv += "energy," + std::to_string(k) + ",-1," + fmt_g(result.energies[k]) +
           "\n";
  }
  for (size_t k = 0; k < result.coefficients.size(); ++k) {
    for (size_t i = 0; i < result.coefficients[k].size(); ++i) {
      csv += "coefficient," + std::to_string(k) + "," + std::to_string(i) +
             "," + fmt_g(result.coefficients[k][i]) + "\n";
    }
  }
  for (size_t i = 0; i < result.densities.size(); ++i) {
    csv += "density,-1," + std::to_string(i) + "," + fmt_g(result.densities[i]) +
           "\n";
  }

  const std::string out = args.out.empty() ? "huckel.csv" : args.out;
  write_text_file(out, csv);

  std::ifstream in(system_path);
  std::ostringstream buf;
  buf << in.rdbuf();
  qpm::manifest::RunManifest m;
  m.command_line = args.command_line;
  m.config_snapshot = buf.str(); // the pi-system file is the whole input
  qpm::manifest::write(out, std::move(m));
  std::cout << "huckel: " << system.atom_count << " atoms -> " << out << "\n";
}

// --- classical ------------------------------------------------------------------

void cmd_classical(const GlobalArgs& args, const std::string& material_flag,
                   const std::string& formula, double field, double length_um,
                   double wavelength_nm, double nx_flag, double ny_flag) {
  const auto cfg = load_config(args);
  std::string material_path = material_flag;
  if (material_path.empty() && cfg.material_path) {
    material_path = *cfg.material_path;
  }
  if (material_path.empty()) {
    throw qpm::ConfigError("no material file: pass --material or set "
                           "[material] file in the config");
  }
  const auto material = qpm::config::load_material(material_path);

  qpm::classical::IndexEllipsoid ell;
  ell.eo = material.eo;
  ell.n_x = nx_flag > 0.0
                ? nx_flag
                : qpm::classical::sellmeier_n(material.sellmeier, wavelength_nm,
                                              qpm::classical::Polarization::X);
  ell.n_y = ny_flag > 0.0
                ? ny_flag
                : qpm::classical::sellmeier_n(material.sellmeier, wavelength_nm,
                                              qpm::classical::Polarization::Y);
  ell.n_z = std::max(ell.n_x, ell.n_y);

  const bool npp = formula == "npp";
  const double gamma =
      npp ? qpm::classical::retardation_npp(ell, field, length_um, wavelength_nm)
          : qpm::classical::retardation_mna(ell, field, length_um, wavelength_nm);
  const double gamma0 =
      npp ? qpm::classical::retardation_npp(ell, 0.0, length_um, wavelength_nm)
          : qpm::classical::retardation_mna(ell, 0.0, length_um, wavelength_nm);
  double mod = std::fmod(gamma, 2.0 * std::numbers::pi);
  if (mod < 0.0) mod += 2.0 * std::numbers::pi;

  std::cout << "classical " << formula << ": gamma_rad=" << fmt_g(gamma)
            << " gamma_mod_2pi_rad=" << fmt_g(mod)
            << " delta_rad=" << fmt_g(gamma - gamma0) << " n_x=" << fmt_g(ell.n_x)
            << " n_y=" << fmt_g(ell.n_y) << "\n";
}

// --- flux -------------------------------------------------------------------------

void cmd_flux(const GlobalArgs& args, double wavelength_nm, double power_mw,
              double beamwidth_um, double cross_section_a2) {
  const auto cfg = load_config(args);
  qpm::transport::BeamSpec beam = cfg.beam;
  if (wavelength_nm > 0.0) beam.wavelength_nm = wavelength_nm;
  if (power_mw >= 0.0) beam.power_mw = power_mw;
  if (beamwidth_um > 0.0) beam.beamwidth_um = beamwidth_um;
  const double sigma = cross_section_a2 > 0.0
                           ? cross_section_a2
                           : qpm::crystal::molecule_cross_section(cfg.cell);

  const double flux = qpm::transport::photon_flux_per_cm2_s(beam);
  std::cout << "flux_per_cm2_s = " << fmt_g(flux) << "\n";
  std::cout << "cross_section_a2 = " << fmt_g(sigma) << "\n";
  if (flux > 0.0) {
    const double interval = qpm::transport::interaction_interval_ns(flux, sigma);
    std::cout << "interactions_per_molecule_per_s = " << fmt_g(1e9 / interval)
              << "\n";
    std::cout << "interval_ns = " << fmt_g(interval) << "\n";
  } else {
    std::cout << "interactions_per_molecule_per_s = 0\n";
    std::cout << "interval: infinite\n";
  }
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"quantum-photonic model of the transverse electro-optic effect"};
  app.require_subcommand(1);
  app.fallthrough(); // global flags may follow the subcommand name

  GlobalArgs args;
  args.command_line = join_command_line(argc, argv);
  app.add_option("--config", args.config_path, "INI config file")
      ->capture_default_str();
  app.add_option("--out", args.out, "output file path");
  std::uint64_t seed_opt = 0;
  std::uint64_t trials_opt = 0;
  int threads_opt = 0;
  auto* seed_flag = app.add_option("--seed", seed_opt, "override seed");
  auto* trials_flag = app.add_option("--trials", trials_opt, "override trials");
  auto* threads_flag =
      app.add_option("--threads", threads_opt, "override worker count");

  auto* disp = app.add_subcommand("dispersion", "index and retardation vs wavelength");
  double min_nm = 600.0, max_nm = 1100.0, step_nm = 100.0;
  disp->add_option("--min-nm", min_nm, "first wavelength")->capture_default_str();
  disp->add_option("--max-nm", max_nm, "last wavelength")->capture_default_str();
  disp->add_option("--step-nm", step_nm, "wavelength step")->capture_default_str();

  auto* eo = app.add_subcommand("eo-scan", "phase retardation vs applied field");
  std::vector<double> fields;
  double eo_psi = 0.0, eo_kappa = -1.0;
  eo->add_option("--fields", fields, "field magnitudes in V/um (must include 0)")
      ->required()
      ->delimiter(',');
  eo->add_option("--psi", eo_psi, "field angle from the CT axis, degrees")
      ->capture_default_str();
  eo->add_option("--kappa", eo_kappa, "override orbit.kappa_per_v_um");

  auto* angle = app.add_subcommand("angle-scan", "retardation change vs field angle");
  double scan_field = 1.0, psi_min = 0.0, psi_max = 90.0, psi_step = 10.0;
  double angle_kappa = -1.0;
  angle->add_option("--field", scan_field, "field magnitude in V/um")
      ->capture_default_str();
  angle->add_option("--psi-min", psi_min, "first angle, degrees")->capture_default_str();
  angle->add_option("--psi-max", psi_max, "last angle, degrees")->capture_default_str();
  angle->add_option("--psi-step", psi_step, "angle step, degrees")->capture_default_str();
  angle->add_option("--kappa", angle_kappa, "override orbit.kappa_per_v_um");

  auto* cal = app.add_subcommand("calibrate", "fit orbit parameters or field coupling");
  std::string targets_path;
  double kappa_target = -1.0, cal_psi = 0.0;
  std::uint64_t fit_trials = 2000, final_trials = 20000;
  int max_evals = 500;
  qpm::calibration::ParameterBounds bounds;
  qpm::orbit::OrbitShape init{0.1, 1.0, 2.0};
  cal->add_option("--targets", targets_path,
                  "CSV of wavelength_nm,polarization,n_target");
  cal->add_option("--kappa-target", kappa_target,
                  "fit kappa to this effective R (pm/V) instead of shape");
  double cal_wavelength = 0.0;
  cal->add_option("--wavelength-nm", cal_wavelength,
                  "beam wavelength for the kappa fit (default: config beam)");
  cal->add_option("--psi", cal_psi, "field angle for the kappa fit, degrees")
      ->capture_default_str();
  cal->add_option("--fit-trials", fit_trials, "trials per objective evaluation")
      ->capture_default_str();
  cal->add_option("--final-trials", final_trials, "trials for the final residual")
      ->capture_default_str();
  cal->add_option("--max-evals", max_evals, "objective evaluation budget")
      ->capture_default_str();
  cal->add_option("--eps-min", bounds.eccentricity_min)->capture_default_str();
  cal->add_option("--eps-max", bounds.eccentricity_max)->capture_default_str();
  cal->add_option("--u-min", bounds.semimajor_min_angstrom)->capture_default_str();
  cal->add_option("--u-max", bounds.semimajor_max_angstrom)->capture_default_str();
  cal->add_option("--z-min", bounds.z_min)->capture_default_str();
  cal->add_option("--z-max", bounds.z_max)->capture_default_str();
  cal->add_option("--init-eps", init.eccentricity)->capture_default_str();
  cal->add_option("--init-u", init.semimajor_angstrom)->capture_default_str();
  cal->add_option("--init-z", init.z_eff)->capture_default_str();

  auto* huck = app.add_subcommand("huckel", "pi-system orbitals and densities");
  std::string system_path;
  huck->add_option("--system", system_path, "pi-system description file")
      ->required();

  auto* classical = app.add_subcommand("classical", "index-ellipsoid retardation");
  std::string material_flag, formula = "npp";
  double cl_field = 0.0, cl_length = 3.0, cl_wavelength = 1064.0;
  double nx_flag = 0.0, ny_flag = 0.0;
  classical->add_option("--material", material_flag, "material data file");
  classical->add_option("--formula", formula, "npp or mna")
      ->check(CLI::IsMember({"npp", "mna"}))
      ->capture_default_str();
  classical->add_option("--field", cl_field, "applied field, V/um")
      ->capture_default_str();
  classical->add_option("--length-um", cl_length, "crystal length, um")
      ->capture_default_str();
  classical->add_option("--wavelength-nm", cl_wavelength, "wavelength, nm")
      ->capture_default_str();
  classical->add_option("--nx", nx_flag, "override n_x (skip Sellmeier)");
  classical->add_option("--ny", ny_flag, "override n_y (skip Sellmeier)");

  auto* flux = app.add_subcommand("flux", "photon flux and interaction interval");
  double fl_wavelength = 0.0, fl_power = -1.0, fl_width = 0.0, fl_sigma = 0.0;
  flux->add_option("--wavelength-nm", fl_wavelength, "override wavelength");
  flux->add_option("--power-mw", fl_power, "override power");
  flux->add_option("--beamwidth-um", fl_width, "override beamwidth");
  flux->add_option("--cross-section-a2", fl_sigma, "override cross-section");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (*seed_flag) args.seed = seed_opt;
  if (*trials_flag) args.trials = trials_opt;
  if (*threads_flag) args.threads = threads_opt;

  try {
    if (*disp) {
      cmd_dispersion(args, min_nm, max_nm, step_nm);
    } else if (*eo) {
      cmd_eo_scan(args, fields, eo_psi, eo_kappa);
    } else if (*angle) {
      cmd_angle_scan(args, scan_field, psi_min, psi_max, psi_step, angle_kappa);
    } else if (*cal) {
      cmd_calibrate(args, targets_path, kappa_target, cal_wavelength, cal_psi,
                    fit_trials, final_trials, max_evals, bounds, init);
    } else if (*huck) {
      cmd_huckel(args, system_path);
    } else if (*classical) {
      cmd_classical(args, material_flag, formula, cl_field, cl_length,
                    cl_wavelength, nx_flag, ny_flag);
    } else if (*flux) {
      cmd_flux(args, fl_wavelength, fl_power, fl_width, fl_sigma);
    }
  } catch (const qpm::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const qpm::ConvergenceError& e) {
    std::cerr << "convergence error: " << e.what() << "\n";
    return 4;
  } catch (const qpm::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
