#include "ctelig/common/hashing.h"

#include <array>
#include <cstdio>
#include <fstream>

#include "ctelig/common/errors.h"

namespace ctelig {

namespace {
constexpr std::uint64_t kFnv64Offset = 14695981039346656037ULL;
constexpr std::uint64_t kFnv64Prime = 1099511628211ULL;
}  // namespace

std::uint32_t fnv1a32(std::string_view bytes) {
  std::uint32_t h = 2166136261u;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 16777619u;
  }
  return h;
}

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t state) {
  for (unsigned char c : bytes) {
    state ^= c;
    state *= kFnv64Prime;
  }
  return state;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  return fnv1a64(bytes, kFnv64Offset);
}

std::uint64_t fileChecksum(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot read " + path.string());
  }
  std::array<char, 1 << 16> buffer{};
  std::uint64_t h = kFnv64Offset;
  while (in) {
    in.read(buffer.data(), buffer.size());
    h = fnv1a64(std::string_view(buffer.data(),
                                 static_cast<std::size_t>(in.gcount())),
                h);
  }
  return h;
}

std::string toHex(std::uint64_t value) {
  char out[17];
  std::snprintf(out, sizeof(out), "%016llx",
                static_cast<unsigned long long>(value));
  return out;
}

}  // namespace ctelig
