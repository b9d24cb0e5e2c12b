#pragma once

#include <map>
#include <string>
#include <vector>

namespace lscd {

extern const char* kToolVersion;

// Reproducibility record emitted alongside every output: the invoking
// command line, a digest of the effective configuration, seeds, input
// file checksums and wallclock.
struct RunManifest {
  std::string command_line;
  std::string config_digest;
  std::vector<std::string> seeds;
  std::map<std::string, std::string> input_checksums;  // path -> sha256
  std::string tool_version = kToolVersion;
  double wallclock_s = 0.0;

  void add_input(const std::string& path);
  void save(const std::string& path) const;
  static RunManifest load(const std::string& path);

  // True when every recorded input still hashes to its stored checksum.
  bool inputs_match() const;
};

// Digest of a canonicalized key=value map.
std::string config_digest(const std::map<std::string, std::string>& kv);

}  // namespace lscd
