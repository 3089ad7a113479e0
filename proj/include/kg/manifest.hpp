#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace kg {

/// One pass/fail record of an in-experiment assertion.
struct Assertion {
  std::string name;
  bool passed = false;
  double value = 0.0;
  double threshold = 0.0;
};

/// Artifact in the output directory with a content digest of its bytes.
struct Artifact {
  std::string path;
  std::string digest;  // fnv1a-64, hex
};

struct RunManifest {
  std::string version;
  std::string experiment;
  std::map<std::string, std::string> config;
  std::vector<Artifact> artifacts;
  std::vector<Assertion> assertions;
  bool passed = false;
  double wall_seconds = 0.0;
  std::int64_t steps = 0;

  std::string to_json() const;
};

constexpr const char* kVersion = "kglab 0.1.0";

/// Writes rows of doubles with 17 significant digits (exact round trip).
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

std::uint64_t fnv1a64_file(const std::string& path);
std::string digest_hex(std::uint64_t d);

}  // namespace kg
