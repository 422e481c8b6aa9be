#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

namespace lprbm {

inline constexpr const char* kToolVersion = "lprbm 0.1.0";

// Canonical hash of a run configuration (sorted-key JSON dump).
std::string config_hash(const nlohmann::json& config);

// Writes "<output>.provenance.json" next to an output file: the config, its
// hash, the seed and the tool version.
void write_provenance(const std::filesystem::path& output,
                      const nlohmann::json& config);

}  // namespace lprbm
