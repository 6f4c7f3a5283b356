#include "ctelig/common/files.h"

#include <zlib.h>

#include <fstream>
#include <iterator>

#include "ctelig/common/errors.h"

namespace ctelig {

namespace {

bool isGzip(const std::string& bytes) {
  return bytes.size() >= 2 && static_cast<unsigned char>(bytes[0]) == 0x1f &&
         static_cast<unsigned char>(bytes[1]) == 0x8b;
}

std::string inflateGzip(const std::string& compressed,
                        const std::filesystem::path& path) {
  z_stream stream{};
  // 16 + MAX_WBITS selects gzip framing.
  if (inflateInit2(&stream, 16 + MAX_WBITS) != Z_OK) {
    throw IoError("zlib init failed for " + path.string());
  }
  stream.next_in =
      reinterpret_cast<Bytef*>(const_cast<char*>(compressed.data()));
  stream.avail_in = static_cast<uInt>(compressed.size());
  std::string out;
  char buffer[1 << 15];
  int rc;
  do {
    stream.next_out = reinterpret_cast<Bytef*>(buffer);
    stream.avail_out = sizeof(buffer);
    rc = inflate(&stream, Z_NO_FLUSH);
    if (rc != Z_OK && rc != Z_STREAM_END) {
      inflateEnd(&stream);
      throw DataError("corrupt gzip stream in " + path.string());
    }
    out.append(buffer, sizeof(buffer) - stream.avail_out);
  } while (rc != Z_STREAM_END);
  inflateEnd(&stream);
  return out;
}

}  // namespace

std::string readFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot read " + path.string());
  }
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  if (in.bad()) {
    throw IoError("read failed for " + path.string());
  }
  return isGzip(bytes) ? inflateGzip(bytes, path) : bytes;
}

void ensureParentDirectory(const std::filesystem::path& path) {
  const auto parent = path.parent_path();
  if (parent.empty()) {
    return;
  }
  std::error_code ec;
  std::filesystem::create_directories(parent, ec);
  if (ec) {
    throw IoError("cannot create directory " + parent.string() + ": " +
                  ec.message());
  }
}

void writeFile(const std::filesystem::path& path, const std::string& content) {
  ensureParentDirectory(path);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot write " + path.string());
  }
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) {
    throw IoError("write failed for " + path.string());
  }
}

}  // namespace ctelig
