#pragma once

#include <filesystem>
#include <json.hpp>
#include <string>
#include <vector>

#include "ctelig/cli/config.h"

namespace ctelig::cli {

inline constexpr const char* kVersion = "0.1.0";

// What one subcommand read and wrote. Together with the effective
// configuration and seed it is enough to rerun the step.
class RunManifest {
 public:
  RunManifest(std::string subcommand, std::vector<std::string> arguments,
              const PipelineConfig& config);

  // Files are recorded with their FNV-1a 64 checksum; call after writing.
  void input(const fs::path& path);
  void output(const fs::path& path);
  void note(const std::string& key, nlohmann::json value);

  nlohmann::json toJson() const;
  // Writes to <work_dir>/manifests/<name>.json and returns the path.
  fs::path write(const std::string& name) const;

 private:
  std::string subcommand_;
  std::vector<std::string> arguments_;
  const PipelineConfig& config_;
  nlohmann::json inputs_ = nlohmann::json::array();
  nlohmann::json outputs_ = nlohmann::json::array();
  nlohmann::json notes_ = nlohmann::json::object();
};

}  // namespace ctelig::cli
