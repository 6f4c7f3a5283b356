#pragma once

#include <filesystem>
#include <string>

namespace ctelig {

// Reads a whole file; transparently inflates gzip input (by magic bytes).
std::string readFile(const std::filesystem::path& path);

void writeFile(const std::filesystem::path& path, const std::string& content);

// Creates the parent directories of path; throws IoError on failure.
void ensureParentDirectory(const std::filesystem::path& path);

}  // namespace ctelig
