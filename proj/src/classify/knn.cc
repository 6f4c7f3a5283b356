#include "ctelig/classify/knn.h"

#include <algorithm>
#include <cmath>
#include <queue>

#include "ctelig/common/errors.h"

namespace ctelig::classify {

void KnnHyper::validate() const {
  if (k < 1) throw ConfigError("knn: k must be at least 1");
}

nlohmann::json KnnHyper::toJson() const { return {{"k", k}}; }

KnnHyper KnnHyper::fromJson(const nlohmann::json& j) {
  KnnHyper h;
  h.k = j.at("k").get<std::size_t>();
  return h;
}

KnnIndex::KnnIndex(FeatureMatrix points, std::vector<Label> labels)
    : points_(std::move(points)), labels_(std::move(labels)) {
  if (static_cast<std::size_t>(points_.rows()) != labels_.size()) {
    throw std::invalid_argument("knn: point and label counts differ");
  }
}

KnnVote KnnIndex::vote(std::span<const double> query, std::size_t k) const {
  if (k == 0) {
    throw std::invalid_argument("knn: k must be positive");
  }
  if (query.size() != static_cast<std::size_t>(points_.cols())) {
    throw std::invalid_argument("knn: query dimension mismatch");
  }
  // Max-heap of the k best (distance, index) pairs seen so far.
  using Entry = std::pair<double, std::size_t>;
  std::priority_queue<Entry> best;
  const auto dim = query.size();
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    const double* row = points_.data() + i * dim;
    double d = 0.0;
    for (std::size_t j = 0; j < dim; ++j) {
      const double diff = row[j] - query[j];
      d += diff * diff;
    }
    if (best.size() < k) {
      best.emplace(d, i);
    } else if (Entry(d, i) < best.top()) {
      best.pop();
      best.emplace(d, i);
    }
  }
  KnnVote out;
  out.neighbors.resize(best.size());
  for (std::size_t r = best.size(); r > 0; --r) {
    out.neighbors[r - 1] = best.top().second;
    best.pop();
  }
  if (out.neighbors.empty()) {
    return out;
  }
  std::size_t eligible = 0;
  for (auto i : out.neighbors) {
    eligible += labels_[i] == Label::Eligible;
  }
  const auto n = out.neighbors.size();
  out.eligibleFraction = static_cast<double>(eligible) / static_cast<double>(n);
  if (2 * eligible == n) {
    out.label = labels_[out.neighbors.front()];
  } else {
    out.label = 2 * eligible > n ? Label::Eligible : Label::NotEligible;
  }
  return out;
}

KnnModel::KnnModel(KnnIndex index, EmbeddingSource embeddings, KnnHyper hyper)
    : index_(std::move(index)), embeddings_(std::move(embeddings)), hyper_(hyper) {
  setEmbeddingOrigin(embeddings_.path, embeddings_.checksum);
}

Prediction KnnModel::predict(std::string_view text) const {
  bool oov = false;
  const auto x = sentenceFeatures(*embeddings_.model, text, &oov);
  const auto v = index_.vote(std::span<const double>(x.data(), static_cast<std::size_t>(x.size())),
                             hyper_.k);
  Prediction p;
  p.label = v.label;
  p.scores = {1.0 - v.eligibleFraction, v.eligibleFraction};
  p.lowConfidence = oov;
  return p;
}

void KnnModel::store(ModelFile& file) const {
  file.header["hyper"] = hyper_.toJson();
  const auto& pts = index_.points();
  std::vector<double> values(pts.data(), pts.data() + pts.size());
  file.blobs["points"] = Blob{{static_cast<std::uint64_t>(pts.rows()),
                               static_cast<std::uint64_t>(pts.cols())},
                              std::move(values)};
  std::vector<float> labels;
  labels.reserve(index_.size());
  for (auto l : index_.labels()) {
    labels.push_back(static_cast<float>(static_cast<int>(l)));
  }
  file.blobs["labels"] = Blob{{index_.size()}, std::move(labels)};
}

std::unique_ptr<KnnModel> KnnModel::restore(const ModelFile& file,
                                            EmbeddingSource embeddings) {
  const auto& pts = file.blob("points");
  const auto& raw = file.blob("labels").floats();
  if (pts.shape.size() != 2 || pts.shape[0] != raw.size()) {
    throw DataError("knn model file: inconsistent shapes");
  }
  FeatureMatrix points = Eigen::Map<const FeatureMatrix>(
      pts.doubles().data(), static_cast<Eigen::Index>(pts.shape[0]),
      static_cast<Eigen::Index>(pts.shape[1]));
  std::vector<Label> labels;
  labels.reserve(raw.size());
  for (float l : raw) {
    labels.push_back(l > 0.5f ? Label::Eligible : Label::NotEligible);
  }
  if (embeddings.model->dim() != points.cols()) {
    throw DataError("knn model file: embedding dimension does not match stored points");
  }
  return std::make_unique<KnnModel>(KnnIndex(std::move(points), std::move(labels)),
                                    std::move(embeddings),
                                    KnnHyper::fromJson(file.header.at("hyper")));
}

std::unique_ptr<KnnModel> trainKnn(const Dataset& dataset, EmbeddingSource embeddings,
                                   const KnnHyper& hyper, unsigned threads) {
  hyper.validate();
  if (dataset.empty()) {
    throw DataError("cannot train kNN on an empty dataset");
  }
  if (!embeddings.model) {
    throw ConfigError("knn needs word embeddings");
  }
  auto points = datasetFeatures(*embeddings.model, dataset, threads);
  std::vector<Label> labels;
  labels.reserve(dataset.size());
  for (const auto& s : dataset) {
    labels.push_back(s.label);
  }
  return std::make_unique<KnnModel>(KnnIndex(std::move(points), std::move(labels)),
                                    std::move(embeddings), hyper);
}

}  // namespace ctelig::classify
