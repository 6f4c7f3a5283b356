#pragma once

#include <filesystem>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "ctelig/classify/classifier.h"

namespace ctelig::cli {

namespace fs = std::filesystem;

// Where each subcommand reads and writes under the work directory.
struct Artifacts {
  explicit Artifacts(const fs::path& workDir);

  fs::path studies;        // ingest
  fs::path corpus;         // preprocess
  fs::path phrases;        // phrases
  fs::path phrasedCorpus;  // phrases
  fs::path embeddings;     // train-embeddings
  fs::path models;         // train-classifier
  fs::path reports;        // evaluate, learning-curve
  fs::path analysis;       // cluster, project, export-projector

  fs::path model(classify::ModelKind kind) const;
};

struct Streams {
  std::istream& in;
  std::ostream& out;
  std::ostream& err;
};

// Parses the command line (args[0] is the program name), runs the
// subcommand and returns the process exit code. Errors are reported on
// io.err with their category.
int runCli(const std::vector<std::string>& args, Streams io);

}  // namespace ctelig::cli
