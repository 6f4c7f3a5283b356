#pragma once

#include <json.hpp>
#include <memory>
#include <span>

#include "ctelig/classify/classifier.h"
#include "ctelig/classify/encoder.h"

namespace ctelig::classify {

struct KnnHyper {
  std::size_t k = 3;

  void validate() const;
  nlohmann::json toJson() const;
  static KnnHyper fromJson(const nlohmann::json& j);
};

struct KnnVote {
  Label label = Label::Eligible;
  double eligibleFraction = 0.0;
  std::vector<std::size_t> neighbors;  // nearest first
};

// Exact Euclidean k-nearest-neighbour vote over stored points. Equal
// distances keep the lower index; a tied vote (even k only) goes to the
// label of the nearest neighbour.
class KnnIndex {
 public:
  KnnIndex() = default;
  KnnIndex(FeatureMatrix points, std::vector<Label> labels);

  std::size_t size() const { return labels_.size(); }
  const FeatureMatrix& points() const { return points_; }
  const std::vector<Label>& labels() const { return labels_; }
  KnnVote vote(std::span<const double> query, std::size_t k) const;

 private:
  FeatureMatrix points_;
  std::vector<Label> labels_;
};

class KnnModel : public Classifier {
 public:
  KnnModel(KnnIndex index, EmbeddingSource embeddings, KnnHyper hyper);

  ModelKind kind() const override { return ModelKind::Knn; }
  Prediction predict(std::string_view text) const override;
  void store(ModelFile& file) const override;
  static std::unique_ptr<KnnModel> restore(const ModelFile& file,
                                           EmbeddingSource embeddings);

  const KnnIndex& index() const { return index_; }
  const KnnHyper& hyper() const { return hyper_; }

 private:
  KnnIndex index_;
  EmbeddingSource embeddings_;
  KnnHyper hyper_;
};

// Stores the averaged sentence vectors. Throws DataError when empty.
std::unique_ptr<KnnModel> trainKnn(const Dataset& dataset,
                                   EmbeddingSource embeddings,
                                   const KnnHyper& hyper, unsigned threads = 1);

}  // namespace ctelig::classify
