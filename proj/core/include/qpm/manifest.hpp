#pragma once

#include <cstdint>
#include <string>

namespace qpm::manifest {

struct RunManifest {
  std::string command_line;
  std::string config_snapshot;
  std::uint64_t seed = 0;
  std::uint64_t trials = 0;
  std::string timestamp;      // ISO-8601 UTC, filled by write if empty
  std::string engine_version; // filled by write if empty
};

// Serializes the manifest as JSON next to the output it describes, at
// <output_path>.manifest.json. The pair (command_line, config_snapshot,
// seed, trials, engine_version) reproduces the output byte-exactly; the
// timestamp is provenance only.
void write(const std::string& output_path, RunManifest manifest);

std::string utc_timestamp();

} // namespace qpm::manifest
