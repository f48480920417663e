#include "qpm/manifest.hpp"

#include <ctime>
#include <fstream>

#include <json.hpp>

#include "qpm/common.hpp"

namespace qpm::manifest {

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm_utc{};
  gmtime_r(&now, &tm_utc);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

void write(const std::string& output_path, RunManifest manifest) {
  if (manifest.timestamp.empty()) manifest.timestamp = utc_timestamp();
  if (manifest.engine_version.empty()) manifest.engine_version = kEngineVersion;

  nlohmann::json doc;
  doc["command_line"] = manifest.command_line;
  doc["config_snapshot"] = manifest.config_snapshot;
  doc["seed"] = manifest.seed;
  doc["trials"] = manifest.trials;
  doc["timestamp"] = manifest.timestamp;
  doc["engine_version"] = manifest.engine_version;

  const std::string path = output_path + ".manifest.json";
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write manifest: " + path);
  out << doc.dump(2) << "\n";
}

} // namespace qpm::manifest
