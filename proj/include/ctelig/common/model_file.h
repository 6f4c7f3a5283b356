#pragma once

#include <cstdint>
#include <filesystem>
#include <json.hpp>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace ctelig {

// A named dense array stored in a model file.
struct Blob {
  std::vector<std::uint64_t> shape;
  std::variant<std::vector<float>, std::vector<double>> values;

  std::uint64_t elementCount() const;
  const std::vector<float>& floats() const;
  const std::vector<double>& doubles() const;
};

// Model file layout:
//   line 1: "ctelig-model 1"
//   line 2: one-line JSON header (caller fields + a "blobs" directory)
//   then the raw little-endian blob payloads in directory order.
struct ModelFile {
  nlohmann::json header;
  std::map<std::string, Blob> blobs;

  const Blob& blob(const std::string& name) const;
};

void writeModelFile(const std::filesystem::path& path, const ModelFile& file);
ModelFile readModelFile(const std::filesystem::path& path);

}  // namespace ctelig
