#pragma once

#include <cstdint>
#include <json.hpp>
#include <memory>

#include "ctelig/classify/classifier.h"
#include "ctelig/classify/encoder.h"
#include "ctelig/embed/embedding.h"
#include "ctelig/embed/matrix.h"

namespace ctelig::classify {

struct LinearHyper {
  double learningRate = 0.1;
  int dim = 100;
  int epochs = 100;
  std::uint64_t minCount = 1;
  // Tokens between learning-rate refreshes; the rate decays linearly to 0.
  int lrUpdateRate = 100;
  // Keep pretrained rows fixed instead of fine-tuning them.
  bool freezeEmbeddings = false;

  void validate() const;
  nlohmann::json toJson() const;
  static LinearHyper fromJson(const nlohmann::json& j);
};

// Bag of embeddings: the mean of the statement's word rows goes through a
// linear layer and a two-way softmax.
class LinearAvgModel : public Classifier {
 public:
  LinearAvgModel(WordIndexer words, embed::Matrix embeddings,
                 embed::Matrix weights, std::array<float, 2> bias,
                 LinearHyper hyper);

  ModelKind kind() const override { return ModelKind::Linear; }
  Prediction predict(std::string_view text) const override;
  void store(ModelFile& file) const override;
  static std::unique_ptr<LinearAvgModel> restore(const ModelFile& file);

  const WordIndexer& words() const { return words_; }
  // Row 0 is unused (unknown words are skipped).
  const embed::Matrix& embeddings() const { return embeddings_; }
  // 2 x dim.
  const embed::Matrix& weights() const { return weights_; }
  const std::array<float, 2>& bias() const { return bias_; }
  const LinearHyper& hyper() const { return hyper_; }

 private:
  WordIndexer words_;
  embed::Matrix embeddings_;
  embed::Matrix weights_;
  std::array<float, 2> bias_;
  LinearHyper hyper_;
};

struct LinearTrainStats {
  std::vector<double> epochLoss;  // mean cross-entropy per statement
};

// SGD on softmax cross-entropy, one statement at a time, reshuffled each
// epoch. Word rows start from pretrained vectors when given (their dimension
// must equal hyper.dim), otherwise uniform in +-1/dim; the output layer
// starts at zero. Deterministic for a given seed.
std::unique_ptr<LinearAvgModel> trainLinear(
    const Dataset& dataset, const embed::EmbeddingModel* pretrained,
    const LinearHyper& hyper, std::uint64_t seed,
    LinearTrainStats* stats = nullptr);

}  // namespace ctelig::classify
