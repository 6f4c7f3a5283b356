#pragma once

#include <Eigen/Core>
#include <array>
#include <cstdint>
#include <json.hpp>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "ctelig/classify/classifier.h"
#include "ctelig/classify/encoder.h"
#include "ctelig/common/random.h"
#include "ctelig/embed/embedding.h"

namespace ctelig::classify {

struct CnnHyper {
  std::size_t sequenceLength = 1000;
  std::size_t maxWords = 20'000;
  // Width of trainable embeddings when no pretrained vectors are given.
  int embeddingDim = 100;
  int filters = 128;
  int kernelWidth = 5;
  // Pool widths after each convolution; stride equals the width.
  std::array<int, 3> pools{5, 5, 35};
  int denseUnits = 128;
  std::size_t batchSize = 128;
  double learningRate = 0.001;
  double rho = 0.9;
  double epsilon = 1e-8;
  int epochs = 10;
  // Pretrained embeddings stay fixed; without them the table is trained.
  bool freezeEmbeddings = true;
  unsigned threads = 1;

  // Throws ConfigError, including when the sequence is too short for the
  // layer stack.
  void validate() const;
  nlohmann::json toJson() const;
  static CnnHyper fromJson(const nlohmann::json& j);
};

// Positions after each layer: input, conv1, pool1, conv2, pool2, conv3,
// pool3. Throws ConfigError when a layer would have no output position.
std::vector<std::size_t> shapeChain(const CnnHyper& hyper);

using Sequence = std::vector<std::int32_t>;

// Embedding -> three conv(ReLU) + max-pool blocks -> dense(ReLU) ->
// dense(softmax over 2 classes), in double precision.
class CnnNetwork {
 public:
  enum Param : std::size_t {
    kEmbedding,
    kConv1W, kConv1B,
    kConv2W, kConv2B,
    kConv3W, kConv3B,
    kDenseW, kDenseB,
    kOutputW, kOutputB,
    kParamCount
  };
  static const char* paramName(std::size_t p);

  CnnNetwork() = default;
  CnnNetwork(const CnnHyper& hyper, std::size_t vocabRows, int embeddingDim,
             bool trainEmbedding);

  // Glorot-uniform weights, zero biases, embedding uniform in +-0.05.
  void initialize(Rng& rng);

  std::vector<Eigen::MatrixXd>& params() { return params_; }
  const std::vector<Eigen::MatrixXd>& params() const { return params_; }
  bool trainsEmbedding() const { return trainEmbedding_; }
  const CnnHyper& hyper() const { return hyper_; }

  // Rows are class probabilities (NotEligible, Eligible).
  Eigen::MatrixXd forward(std::span<const Sequence> batch) const;

  // Mean cross-entropy over the batch. When grads is non-null it receives
  // the gradient of every parameter (zero for a frozen embedding).
  double lossAndGradient(std::span<const Sequence> batch,
                         std::span<const int> labels,
                         std::vector<Eigen::MatrixXd>* grads) const;

 private:
  struct Trace;
  void forwardOne(const Sequence& sequence, Trace& trace) const;
  double backwardOne(const Sequence& sequence, int label, double scale,
                     Trace& trace, std::vector<Eigen::MatrixXd>& grads) const;

  CnnHyper hyper_;
  bool trainEmbedding_ = false;
  std::vector<Eigen::MatrixXd> params_;
};

class RmsProp {
 public:
  RmsProp(const CnnNetwork& network, double learningRate, double rho,
          double epsilon);
  void apply(CnnNetwork& network, const std::vector<Eigen::MatrixXd>& grads);

 private:
  double learningRate_;
  double rho_;
  double epsilon_;
  std::vector<Eigen::MatrixXd> accumulators_;
};

class CnnModel : public Classifier {
 public:
  CnnModel(WordIndexer words, CnnNetwork network);

  ModelKind kind() const override { return ModelKind::Cnn; }
  Prediction predict(std::string_view text) const override;
  void store(ModelFile& file) const override;
  static std::unique_ptr<CnnModel> restore(const ModelFile& file);

  const WordIndexer& words() const { return words_; }
  const CnnNetwork& network() const { return network_; }

 private:
  WordIndexer words_;
  CnnNetwork network_;
};

struct CnnTrainStats {
  std::vector<double> epochLoss;  // mean batch loss
};

// Mini-batch RMSProp, reshuffling the training order before each epoch.
std::unique_ptr<CnnModel> trainCnn(const Dataset& dataset,
                                   const embed::EmbeddingModel* pretrained,
                                   const CnnHyper& hyper, std::uint64_t seed,
                                   CnnTrainStats* stats = nullptr);

}  // namespace ctelig::classify
