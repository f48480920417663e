#include "qpm/config.hpp"

#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "qpm/common.hpp"

namespace qpm::config {

namespace {

std::string trim(const std::string& s) {
  size_t b = 0;
  size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

// Tracks which keys a loader consumed so leftovers (typos, stale keys) fail
// loudly with their full path.
class Reader {
public:
  Reader(const IniDoc& doc, std::string origin)
      : doc_(doc), origin_(std::move(origin)) {}

  std::string text(const std::string& section, const std::string& key) {
    const std::string* raw = find(section, key);
    if (raw == nullptr) {
      throw ConfigError(origin_ + ": missing key " + section + "." + key);
    }
    return *raw;
  }

  std::optional<std::string> optional_text(const std::string& section,
                                           const std::string& key) {
    const std::string* raw = find(section, key);
    if (raw == nullptr) return std::nullopt;
    return *raw;
  }

  double number(const std::string& section, const std::string& key) {
    return parse_number(section, key, text(section, key));
  }

  std::optional<double> optional_number(const std::string& section,
                                        const std::string& key) {
    const auto raw = optional_text(section, key);
    if (!raw) return std::nullopt;
    return parse_number(section, key, *raw);
  }

  std::uint64_t unsigned_integer(const std::string& section,
                                 const std::string& key) {
    const std::string raw = text(section, key);
    try {
      size_t used = 0;
      if (!raw.empty() && raw[0] == '-') throw std::invalid_argument(raw);
      const std::uint64_t v = std::stoull(raw, &used);
      if (used != raw.size()) throw std::invalid_argument(raw);
      return v;
    } catch (const std::exception&) {
      throw ConfigError(origin_ + ": " + section + "." + key +
                        ": not a non-negative integer: '" + raw + "'");
    }
  }

  long integer(const std::string& section, const std::string& key) {
    const std::string raw = text(section, key);
    try {
      size_t used = 0;
      const long v = std::stol(raw, &used);
      if (used != raw.size()) throw std::invalid_argument(raw);
      return v;
    } catch (const std::exception&) {
      throw ConfigError(origin_ + ": " + section + "." + key +
                        ": not an integer: '" + raw + "'");
    }
  }

  // Every loaded key must have been consumed.
  void finish() const {
    for (const auto& [section, keys] : doc_.sections) {
      for (const auto& [key, value] : keys) {
        if (!consumed_.count(section + "." + key)) {
          throw ConfigError(origin_ + ": unknown key " + section + "." + key);
        }
      }
    }
  }

  const std::string& origin() const { return origin_; }

private:
  const std::string* find(const std::string& section, const std::string& key) {
    auto sit = doc_.sections.find(section);
    if (sit == doc_.sections.end()) return nullptr;
    auto kit = sit->second.find(key);
    if (kit == sit->second.end()) return nullptr;
    consumed_.insert(section + "." + key);
    return &kit->second;
  }

  double parse_number(const std::string& section, const std::string& key,
                      const std::string& raw) {
    try {
      size_t used = 0;
      const double v = std::stod(raw, &used);
      if (used != raw.size()) throw std::invalid_argument(raw);
      return v;
    } catch (const std::exception&) {
      throw ConfigError(origin_ + ": " + section + "." + key +
                        ": not a number: '" + raw + "'");
    }
  }

  const IniDoc& doc_;
  std::string origin_;
  std::set<std::string> consumed_;
};

// Revalidate a loaded value set, attributing domain violations to the file.
template <typename Fn>
void validate_as_config(const std::string& origin, const char* section,
                        Fn&& fn) {
  try {
    fn();
  } catch (const DomainError& err) {
    throw ConfigError(origin + ": [" + section + "] " + err.what());
  }
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

} // namespace

IniDoc IniDoc::parse_text(const std::string& text, const std::string& origin) {
  IniDoc doc;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) {
        throw ConfigError(origin + ":" + std::to_string(line_no) +
                          ": malformed section header");
      }
      section = trim(line.substr(1, line.size() - 2));
      doc.sections[section]; // a section may be empty but must exist
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(origin + ":" + std::to_string(line_no) +
                        ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError(origin + ":" + std::to_string(line_no) + ": empty key");
    }
    if (section.empty()) {
      throw ConfigError(origin + ":" + std::to_string(line_no) +
                        ": key outside any [section]");
    }
    if (!doc.sections[section].emplace(key, value).second) {
      throw ConfigError(origin + ":" + std::to_string(line_no) +
                        ": duplicate key " + section + "." + key);
    }
  }
  return doc;
}

IniDoc IniDoc::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_text(buf.str(), path);
}

ProjectConfig ProjectConfig::load(const std::string& path) {
  const IniDoc doc = IniDoc::parse_file(path);
  Reader r(doc, path);
  ProjectConfig cfg;

  cfg.cell.a_angstrom = r.number("crystal", "a_angstrom");
  cfg.cell.b_angstrom = r.number("crystal", "b_angstrom");
  cfg.cell.c_angstrom = r.number("crystal", "c_angstrom");
  cfg.cell.beta_deg = r.number("crystal", "beta_deg");
  cfg.cell.molecules_per_cell =
      static_cast<int>(r.integer("crystal", "molecules_per_cell"));
  cfg.cell.transparency_window_um = {
      r.number("crystal", "transparency_min_um"),
      r.number("crystal", "transparency_max_um")};
  cfg.frame.ct_axis_angle_deg = r.number("crystal", "ct_axis_angle_deg");
  cfg.frame.mean_plane_angle_deg = r.number("crystal", "mean_plane_angle_deg");

  cfg.shape.eccentricity = r.number("orbit", "eccentricity");
  cfg.shape.semimajor_angstrom = r.number("orbit", "semimajor_angstrom");
  cfg.shape.z_eff = r.number("orbit", "z_eff");
  cfg.kappa_per_v_um = r.number("orbit", "kappa_per_v_um");

  cfg.beam.wavelength_nm = r.number("beam", "wavelength_nm");
  cfg.beam.power_mw = r.number("beam", "power_mw");
  cfg.beam.beamwidth_um = r.number("beam", "beamwidth_um");

  cfg.trials = r.unsigned_integer("simulation", "trials");
  cfg.seed = r.unsigned_integer("simulation", "seed");
  cfg.crystal_length_um = r.number("simulation", "crystal_length_um");
  cfg.homo_lumo_gap_ev = r.number("simulation", "homo_lumo_gap_ev");
  if (const auto threads = r.optional_number("simulation", "threads")) {
    cfg.threads = static_cast<int>(*threads);
  }

  if (const auto material = r.optional_text("material", "file")) {
    namespace fs = std::filesystem;
    fs::path p(*material);
    if (p.is_relative()) p = fs::path(path).parent_path() / p;
    cfg.material_path = p.string();
  }
  r.finish();

  validate_as_config(path, "crystal", [&] {
    cfg.cell.validate();
    cfg.frame.validate();
  });
  validate_as_config(path, "orbit", [&] {
    cfg.shape.validate();
    if (!(cfg.kappa_per_v_um >= 0.0)) {
      throw DomainError("kappa_per_v_um must be >= 0");
    }
  });
  validate_as_config(path, "beam", [&] { cfg.beam.validate(); });
  validate_as_config(path, "simulation", [&] {
    if (cfg.trials < 1) throw DomainError("trials must be >= 1");
    if (!(cfg.crystal_length_um > 0.0)) {
      throw DomainError("crystal_length_um must be positive");
    }
    if (!(cfg.homo_lumo_gap_ev > 0.0)) {
      throw DomainError("homo_lumo_gap_ev must be positive");
    }
    if (cfg.threads < 1) throw DomainError("threads must be >= 1");
  });
  return cfg;
}

std::string ProjectConfig::snapshot() const {
  std::ostringstream out;
  out << "[crystal]\n";
  out << "a_angstrom = " << format_double(cell.a_angstrom) << "\n";
  out << "b_angstrom = " << format_double(cell.b_angstrom) << "\n";
  out << "c_angstrom = " << format_double(cell.c_angstrom) << "\n";
  out << "beta_deg = " << format_double(cell.beta_deg) << "\n";
  out << "molecules_per_cell = " << cell.molecules_per_cell << "\n";
  out << "transparency_min_um = "
      << format_double(cell.transparency_window_um.first) << "\n";
  out << "transparency_max_um = "
      << format_double(cell.transparency_window_um.second) << "\n";
  out << "ct_axis_angle_deg = " << format_double(frame.ct_axis_angle_deg)
      << "\n";
  out << "mean_plane_angle_deg = " << format_double(frame.mean_plane_angle_deg)
      << "\n";
  out << "\n[orbit]\n";
  out << "eccentricity = " << format_double(shape.eccentricity) << "\n";
  out << "semimajor_angstrom = " << format_double(shape.semimajor_angstrom)
      << "\n";
  out << "z_eff = " << format_double(shape.z_eff) << "\n";
  out << "kappa_per_v_um = " << format_double(kappa_per_v_um) << "\n";
  out << "\n[beam]\n";
  out << "wavelength_nm = " << format_double(beam.wavelength_nm) << "\n";
  out << "power_mw = " << format_double(beam.power_mw) << "\n";
  out << "beamwidth_um = " << format_double(beam.beamwidth_um) << "\n";
  out << "\n[simulation]\n";
  out << "trials = " << trials << "\n";
  out << "seed = " << seed << "\n";
  out << "crystal_length_um = " << format_double(crystal_length_um) << "\n";
  out << "homo_lumo_gap_ev = " << format_double(homo_lumo_gap_ev) << "\n";
  out << "threads = " << threads << "\n";
  if (material_path) {
    out << "\n[material]\n";
    out << "file = " << *material_path << "\n";
  }
  return out.str();
}

crystal::LayerStack ProjectConfig::stack() const {
  return crystal::build_stack(cell, crystal_length_um);
}

transport::SimulationConfig ProjectConfig::simulation() const {
  transport::SimulationConfig sim;
  sim.trials = trials;
  sim.seed = seed;
  sim.beam = beam;
  sim.stack = stack();
  sim.shape = shape;
  sim.homo_lumo_gap_ev = homo_lumo_gap_ev;
  sim.transparency_window_um = cell.transparency_window_um;
  sim.threads = threads;
  return sim;
}

MaterialData load_material(const std::string& path) {
  const IniDoc doc = IniDoc::parse_file(path);
  Reader r(doc, path);
  MaterialData mat;

  mat.sellmeier.x.a = r.number("sellmeier.x", "a");
  mat.sellmeier.x.b = r.number("sellmeier.x", "b");
  mat.sellmeier.x.c = r.number("sellmeier.x", "c");
  mat.sellmeier.y.a = r.number("sellmeier.y", "a");
  mat.sellmeier.y.b = r.number("sellmeier.y", "b");
  mat.sellmeier.y.c = r.number("sellmeier.y", "c");
  mat.sellmeier.window_min_um = r.number("window", "min_um");
  mat.sellmeier.window_max_um = r.number("window", "max_um");

  mat.eo.r11 = r.optional_number("eo", "r11");
  mat.eo.r12 = r.optional_number("eo", "r12");
  mat.eo.r21 = r.optional_number("eo", "r21");
  mat.eo.r22 = r.optional_number("eo", "r22");
  mat.eo.r31 = r.optional_number("eo", "r31");
  mat.eo.r51 = r.optional_number("eo", "r51");
  mat.eo.r61 = r.optional_number("eo", "r61");
  r.finish();

  validate_as_config(path, "sellmeier", [&] { mat.sellmeier.validate(); });
  return mat;
}

} // namespace qpm::config
