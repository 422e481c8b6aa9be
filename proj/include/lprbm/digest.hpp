#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace lprbm {

// SHA-256, hex-encoded. Used for data-file checksums and config hashes.
std::string sha256_hex(std::string_view bytes);
std::string sha256_file_hex(const std::filesystem::path& path);

}  // namespace lprbm
