#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "ctelig/analyze/tsne.h"
#include "ctelig/classify/cnn.h"
#include "ctelig/classify/knn.h"
#include "ctelig/classify/linear.h"
#include "ctelig/classify/svm.h"
#include "ctelig/embed/embedding.h"
#include "ctelig/ingest/study.h"
#include "ctelig/phrases/phrases.h"
#include "ctelig/textprep/pipeline.h"

namespace ctelig::cli {

namespace fs = std::filesystem;

enum class EmbeddingMode { FastText, Gensim };

struct PathsConfig {
  fs::path registry;
  fs::path workDir = "work";
  fs::path simulation = "data/clinical_simulation.tsv";
};

struct RunConfig {
  std::uint64_t seed = 42;
  unsigned threads = 1;
};

struct IngestConfig {
  ingest::OncologyMatch match = ingest::OncologyMatch::Substring;
  bool sortByStudyId = false;
};

struct PhrasesConfig {
  bool enabled = true;
  phrases::PhraseParams params;
};

struct EmbeddingsConfig {
  // FastText mode composes subword n-grams; Gensim mode uses plain words.
  EmbeddingMode mode = EmbeddingMode::FastText;
  embed::EmbeddingHyper hyper;
  // Unset means the mode's default threshold.
  std::optional<double> samplingThreshold;

  embed::EmbeddingHyper effective() const;
};

struct DatasetConfig {
  // Balanced statements kept for classifier work; 0 keeps all.
  std::size_t maxSamples = 0;
  double testFraction = textprep::kDefaultTestFraction;
};

struct ClassifyConfig {
  classify::LinearHyper linear;
  bool linearPretrained = true;
  classify::CnnHyper cnn;
  bool cnnPretrained = true;
  classify::SvmHyper svm;
  classify::KnnHyper knn;
};

struct EvaluateConfig {
  std::size_t folds = 5;
  std::vector<std::size_t> curveSizes{1000, 10000, 100000, 1000000};
};

struct AnalyzeConfig {
  std::size_t clusterWords = 10000;
  std::size_t clusters = 0;  // 0: one tenth of the words read
  std::size_t kmeansMaxIterations = 300;
  std::size_t tsneWords = 500;
  analyze::TsneOptions tsne;
  std::size_t neighbors = 20;
};

struct PipelineConfig {
  PathsConfig paths;
  RunConfig run;
  IngestConfig ingest;
  textprep::PreprocessOptions preprocess;
  PhrasesConfig phrases;
  EmbeddingsConfig embeddings;
  DatasetConfig dataset;
  ClassifyConfig classify;
  EvaluateConfig evaluate;
  AnalyzeConfig analyze;

  // Reads an INI file over the defaults. Unknown sections or keys, and
  // values that do not parse, throw ConfigError.
  static PipelineConfig load(const fs::path& path);

  // "section.key=value"; throws ConfigError.
  void set(const std::string& assignment);
  void set(const std::string& section, const std::string& key,
           const std::string& value);

  // Every key with its current value, in a fixed order.
  std::vector<std::pair<std::string, std::string>> entries() const;
  nlohmann::json toJson() const;
  // FNV-1a 64 of the canonical "key=value" listing, as hex.
  std::string hash() const;

  // Throws ConfigError for out-of-range values.
  void validate() const;
};

}  // namespace ctelig::cli
