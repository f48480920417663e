#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "qpm/classical.hpp"
#include "qpm/crystal.hpp"
#include "qpm/orbit.hpp"
#include "qpm/transport.hpp"

namespace qpm::config {

// Minimal INI document: [section] headers, key = value lines, '#' or ';'
// comments. Parse errors carry file:line.
struct IniDoc {
  std::map<std::string, std::map<std::string, std::string>> sections;

  static IniDoc parse_text(const std::string& text, const std::string& origin);
  static IniDoc parse_file(const std::string& path);
};

// The project configuration: crystal, orbit, beam and simulation sections,
// plus an optional material-file pointer. Loading is strict: a missing,
// malformed, or unknown key fails with its section.key path.
struct ProjectConfig {
  crystal::UnitCell cell;
  crystal::MolecularFrame frame;
  orbit::OrbitShape shape;
  double kappa_per_v_um = 0.0;
  transport::BeamSpec beam;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  double crystal_length_um = 0.0;
  double homo_lumo_gap_ev = 0.0;
  int threads = 1;
  std::optional<std::string> material_path; // resolved against the cfg dir

  static ProjectConfig load(const std::string& path);

  // Canonical text round-trip of every loaded value; embedded in run
  // manifests so an output can be reproduced without the original file.
  std::string snapshot() const;

  crystal::LayerStack stack() const;
  transport::SimulationConfig simulation() const; // no field attached
};

struct MaterialData {
  classical::SellmeierSet sellmeier;
  classical::EoCoefficients eo;
};

// Material file: [sellmeier.x] and [sellmeier.y] with a, b, c; [window]
// with min_um, max_um; [eo] with any subset of r11..r61 in pm/V.
MaterialData load_material(const std::string& path);

} // namespace qpm::config
