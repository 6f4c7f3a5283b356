#include "ctelig/common/model_file.h"

#include <bit>
#include <fstream>

#include "ctelig/common/errors.h"
#include "ctelig/common/files.h"

namespace ctelig {

static_assert(std::endian::native == std::endian::little,
              "model files are written little-endian");

namespace {
constexpr const char* kMagic = "ctelig-model 1";
}

std::uint64_t Blob::elementCount() const {
  std::uint64_t n = 1;
  for (auto s : shape) {
    n *= s;
  }
  return n;
}

const std::vector<float>& Blob::floats() const {
  if (!std::holds_alternative<std::vector<float>>(values)) {
    throw DataError("blob holds float64 values, expected float32");
  }
  return std::get<std::vector<float>>(values);
}

const std::vector<double>& Blob::doubles() const {
  if (!std::holds_alternative<std::vector<double>>(values)) {
    throw DataError("blob holds float32 values, expected float64");
  }
  return std::get<std::vector<double>>(values);
}

const Blob& ModelFile::blob(const std::string& name) const {
  const auto it = blobs.find(name);
  if (it == blobs.end()) {
    throw DataError("model file has no '" + name + "' array");
  }
  return it->second;
}

void writeModelFile(const std::filesystem::path& path, const ModelFile& file) {
  nlohmann::json header = file.header;
  nlohmann::json directory = nlohmann::json::array();
  for (const auto& [name, blob] : file.blobs) {
    const bool isFloat = std::holds_alternative<std::vector<float>>(blob.values);
    const std::uint64_t size = isFloat ? blob.floats().size() : blob.doubles().size();
    if (size != blob.elementCount()) {
      throw DataError("blob '" + name + "' shape does not match its size");
    }
    directory.push_back(
        {{"name", name}, {"dtype", isFloat ? "f32" : "f64"}, {"shape", blob.shape}});
  }
  header["blobs"] = directory;

  ensureParentDirectory(path);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot write model " + path.string());
  }
  out << kMagic << '\n' << header.dump() << '\n';
  for (const auto& [name, blob] : file.blobs) {
    std::visit(
        [&](const auto& v) {
          out.write(reinterpret_cast<const char*>(v.data()),
                    static_cast<std::streamsize>(v.size() * sizeof(v[0])));
        },
        blob.values);
  }
  if (!out) {
    throw IoError("write failed for " + path.string());
  }
}

ModelFile readModelFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot read model " + path.string());
  }
  std::string magic;
  std::string headerLine;
  if (!std::getline(in, magic) || magic != kMagic) {
    throw FormatError(path.string(), 1, "not a ctelig model file");
  }
  if (!std::getline(in, headerLine)) {
    throw FormatError(path.string(), 2, "missing model header");
  }
  ModelFile file;
  try {
    file.header = nlohmann::json::parse(headerLine);
    for (const auto& entry : file.header.at("blobs")) {
      Blob blob;
      blob.shape = entry.at("shape").get<std::vector<std::uint64_t>>();
      const auto n = blob.elementCount();
      const std::string dtype = entry.at("dtype").get<std::string>();
      auto readInto = [&](auto& v) {
        v.resize(n);
        in.read(reinterpret_cast<char*>(v.data()),
                static_cast<std::streamsize>(n * sizeof(v[0])));
      };
      if (dtype == "f32") {
        std::vector<float> v;
        readInto(v);
        blob.values = std::move(v);
      } else if (dtype == "f64") {
        std::vector<double> v;
        readInto(v);
        blob.values = std::move(v);
      } else {
        throw FormatError(path.string(), 2, "unknown dtype " + dtype);
      }
      if (!in) {
        throw FormatError(path.string(), 0, "truncated payload");
      }
      file.blobs.emplace(entry.at("name").get<std::string>(), std::move(blob));
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path.string(), 2, e.what());
  }
  file.header.erase("blobs");
  return file;
}

}  // namespace ctelig
