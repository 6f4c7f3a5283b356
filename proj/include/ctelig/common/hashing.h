#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace ctelig {

std::uint32_t fnv1a32(std::string_view bytes);
std::uint64_t fnv1a64(std::string_view bytes);
std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t state);

// FNV-1a 64 over a whole file, streamed.
std::uint64_t fileChecksum(const std::filesystem::path& path);

std::string toHex(std::uint64_t value);

}  // namespace ctelig
