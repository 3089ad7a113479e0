#include "kg/manifest.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace kg {

std::string RunManifest::to_json() const {
  nlohmann::json j;
  j["version"] = version;
  j["experiment"] = experiment;
  j["config"] = config;
  j["passed"] = passed;
  j["wall_seconds"] = wall_seconds;
  j["steps"] = steps;
  j["artifacts"] = nlohmann::json::array();
  for (const auto& a : artifacts)
    j["artifacts"].push_back({{"path", a.path}, {"digest", a.digest}});
  j["assertions"] = nlohmann::json::array();
  for (const auto& a : assertions)
    j["assertions"].push_back({{"name", a.name},
                               {"passed", a.passed},
                               {"value", a.value},
                               {"threshold", a.threshold}});
  return j.dump(2);
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_csv: cannot open " + path);
  for (std::size_t i = 0; i < header.size(); ++i)
    out << (i ? "," : "") << header[i];
  out << "\n";
  char buf[40];
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.17g", row[i]);
      out << (i ? "," : "") << buf;
    }
    out << "\n";
  }
}

std::uint64_t fnv1a64_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("fnv1a64_file: cannot open " + path);
  std::uint64_t h = 14695981039346656037ull;
  char c;
  while (in.get(c)) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  return h;
}

std::string digest_hex(std::uint64_t d) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(d));
  return buf;
}

}  // namespace kg
