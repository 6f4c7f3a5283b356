#pragma once

#include <array>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ctelig/common/model_file.h"
#include "ctelig/textprep/dataset.h"

namespace ctelig::classify {

using textprep::Dataset;
using textprep::Label;

enum class ModelKind { Linear, Cnn, Svm, Knn };

const char* toString(ModelKind kind) noexcept;
// Accepts "linear", "cnn", "svm", "knn"; throws ConfigError otherwise.
ModelKind parseModelKind(std::string_view name);

struct Prediction {
  Label label = Label::Eligible;
  // Indexed by Label: scores[0] NotEligible, scores[1] Eligible.
  std::array<double, 2> scores{0.5, 0.5};
  // Set when no token of the statement was known to the model.
  bool lowConfidence = false;
};

// A trained, immutable eligibility classifier over normalized statements.
// predict() is const and safe to call concurrently.
class Classifier {
 public:
  virtual ~Classifier() = default;

  virtual ModelKind kind() const = 0;
  virtual Prediction predict(std::string_view text) const = 0;

  // Predictions for many statements, split across threads when threads > 1.
  std::vector<Prediction> predictAll(std::span<const std::string> texts,
                                     unsigned threads = 1) const;
  std::vector<Label> predictLabels(const Dataset& dataset,
                                   unsigned threads = 1) const;

  // Serializes hyperparameters and weights; the caller adds common fields.
  virtual void store(ModelFile& file) const = 0;

  // Embedding file the model was trained with (empty when none or built in
  // memory). Vector-based models need it again at prediction time.
  const std::filesystem::path& embeddingPath() const { return embeddingPath_; }
  const std::string& embeddingChecksum() const { return embeddingChecksum_; }
  void setEmbeddingOrigin(std::filesystem::path path, std::string checksum) {
    embeddingPath_ = std::move(path);
    embeddingChecksum_ = std::move(checksum);
  }

 private:
  std::filesystem::path embeddingPath_;
  std::string embeddingChecksum_;
};

}  // namespace ctelig::classify
