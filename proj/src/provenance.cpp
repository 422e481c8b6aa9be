#include "lprbm/provenance.hpp"

#include <fstream>

#include "lprbm/digest.hpp"

namespace lprbm {

std::string config_hash(const nlohmann::json& config) {
  // nlohmann objects iterate in sorted key order, so dump() is canonical
  return sha256_hex(config.dump());
}

void write_provenance(const std::filesystem::path& output,
                      const nlohmann::json& config) {
  nlohmann::json j;
  j["config"] = config;
  j["config_hash"] = config_hash(config);
  j["tool"] = kToolVersion;
  const auto path = std::filesystem::path(output.string() + ".provenance.json");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write provenance: " + path.string());
  out << j.dump(1) << "\n";
}

}  // namespace lprbm
