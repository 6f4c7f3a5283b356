#include "ctelig/cli/manifest.h"

#include "ctelig/common/files.h"
#include "ctelig/common/hashing.h"
#include "ctelig/textprep/pipeline.h"

namespace ctelig::cli {

namespace {

nlohmann::json fileEntry(const fs::path& path) {
  return {{"path", path.generic_string()}, {"checksum", toHex(fileChecksum(path))}};
}

}  // namespace

RunManifest::RunManifest(std::string subcommand, std::vector<std::string> arguments,
                         const PipelineConfig& config)
    : subcommand_(std::move(subcommand)),
      arguments_(std::move(arguments)),
      config_(config) {}

void RunManifest::input(const fs::path& path) { inputs_.push_back(fileEntry(path)); }

void RunManifest::output(const fs::path& path) { outputs_.push_back(fileEntry(path)); }

void RunManifest::note(const std::string& key, nlohmann::json value) {
  notes_[key] = std::move(value);
}

nlohmann::json RunManifest::toJson() const {
  nlohmann::json j = {{"subcommand", subcommand_},
                      {"arguments", arguments_},
                      {"seed", config_.run.seed},
                      {"config_hash", config_.hash()},
                      {"config", config_.toJson()},
                      {"inputs", inputs_},
                      {"outputs", outputs_},
                      {"versions",
                       {{"ctelig", kVersion}, {"text_pipeline", textprep::kPipelineVersion}}}};
  if (!notes_.empty()) {
    j["results"] = notes_;
  }
  return j;
}

fs::path RunManifest::write(const std::string& name) const {
  const fs::path path = config_.paths.workDir / "manifests" / (name + ".json");
  ensureParentDirectory(path);
  writeFile(path, toJson().dump(2) + "\n");
  return path;
}

}  // namespace ctelig::cli
