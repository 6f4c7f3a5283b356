#pragma once

#include <filesystem>
#include <memory>
#include <optional>

#include "ctelig/classify/classifier.h"
#include "ctelig/classify/cnn.h"
#include "ctelig/classify/encoder.h"
#include "ctelig/classify/knn.h"
#include "ctelig/classify/linear.h"
#include "ctelig/classify/svm.h"

namespace ctelig::classify {

// Everything needed to train any of the four classifiers.
struct TrainOptions {
  ModelKind kind = ModelKind::Linear;
  LinearHyper linear;
  CnnHyper cnn;
  SvmHyper svm;
  KnnHyper knn;
  // Required for SVM and kNN; optional initialization for linear and CNN.
  std::optional<EmbeddingSource> embeddings;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

std::unique_ptr<Classifier> trainClassifier(const Dataset& dataset,
                                            const TrainOptions& options);

// Model file with a JSON header naming the kind, hyperparameters, text
// pipeline version and, for vector-based models, the embedding file and its
// checksum.
void saveClassifier(const std::filesystem::path& path,
                    const Classifier& classifier);

// Vector-based models reload their embeddings from the recorded path unless
// another file is given; either way the checksum must match.
std::unique_ptr<Classifier> loadClassifier(
    const std::filesystem::path& path,
    const std::optional<std::filesystem::path>& embeddings = std::nullopt);

}  // namespace ctelig::classify
