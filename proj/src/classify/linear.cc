#include "ctelig/classify/linear.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "ctelig/common/errors.h"
#include "ctelig/common/random.h"

namespace ctelig::classify {

namespace {

std::array<double, 2> softmax2(double z0, double z1) {
  const double m = std::max(z0, z1);
  const double e0 = std::exp(z0 - m);
  const double e1 = std::exp(z1 - m);
  return {e0 / (e0 + e1), e1 / (e0 + e1)};
}

}  // namespace

void LinearHyper::validate() const {
  if (!(learningRate > 0)) throw ConfigError("linear: learning rate must be positive");
  if (dim <= 0) throw ConfigError("linear: dim must be positive");
  if (epochs < 0) throw ConfigError("linear: epochs must be non-negative");
  if (minCount < 1) throw ConfigError("linear: min_count must be at least 1");
  if (lrUpdateRate < 1) throw ConfigError("linear: lr_update_rate must be at least 1");
}

nlohmann::json LinearHyper::toJson() const {
  return {{"lr", learningRate},
          {"dim", dim},
          {"epochs", epochs},
          {"min_count", minCount},
          {"lr_update_rate", lrUpdateRate},
          {"freeze_embeddings", freezeEmbeddings}};
}

LinearHyper LinearHyper::fromJson(const nlohmann::json& j) {
  LinearHyper h;
  h.learningRate = j.at("lr").get<double>();
  h.dim = j.at("dim").get<int>();
  h.epochs = j.at("epochs").get<int>();
  h.minCount = j.at("min_count").get<std::uint64_t>();
  h.lrUpdateRate = j.at("lr_update_rate").get<int>();
  h.freezeEmbeddings = j.at("freeze_embeddings").get<bool>();
  return h;
}

LinearAvgModel::LinearAvgModel(WordIndexer words, embed::Matrix embeddings,
                               embed::Matrix weights, std::array<float, 2> bias,
                               LinearHyper hyper)
    : words_(std::move(words)),
      embeddings_(std::move(embeddings)),
      weights_(std::move(weights)),
      bias_(bias),
      hyper_(hyper) {}

Prediction LinearAvgModel::predict(std::string_view text) const {
  const std::size_t dim = embeddings_.cols();
  std::vector<double> hidden(dim, 0.0);
  std::size_t n = 0;
  for (auto token : tokenize(text)) {
    const auto id = words_.index(token);
    if (id == WordIndexer::kPadding) {
      continue;
    }
    const auto row = embeddings_.row(static_cast<std::size_t>(id));
    for (std::size_t i = 0; i < dim; ++i) {
      hidden[i] += row[i];
    }
    ++n;
  }
  Prediction p;
  p.lowConfidence = n == 0;
  double z[2] = {bias_[0], bias_[1]};
  for (std::size_t k = 0; k < 2; ++k) {
    const auto w = weights_.row(k);
    for (std::size_t i = 0; i < dim; ++i) {
      z[k] += w[i] * (n ? hidden[i] / static_cast<double>(n) : 0.0);
    }
  }
  p.scores = softmax2(z[0], z[1]);
  p.label = p.scores[1] >= p.scores[0] ? Label::Eligible : Label::NotEligible;
  return p;
}

void LinearAvgModel::store(ModelFile& file) const {
  file.header["hyper"] = hyper_.toJson();
  file.header["words"] = words_.words();
  file.blobs["embeddings"] = Blob{{embeddings_.rows(), embeddings_.cols()}, embeddings_.data()};
  file.blobs["weights"] = Blob{{weights_.rows(), weights_.cols()}, weights_.data()};
  file.blobs["bias"] = Blob{{2}, std::vector<float>{bias_[0], bias_[1]}};
}

std::unique_ptr<LinearAvgModel> LinearAvgModel::restore(const ModelFile& file) {
  auto words = WordIndexer::fromWords(file.header.at("words").get<std::vector<std::string>>());
  const auto& e = file.blob("embeddings");
  const auto& w = file.blob("weights");
  const auto& b = file.blob("bias").floats();
  if (e.shape.size() != 2 || w.shape.size() != 2 || b.size() != 2 ||
      e.shape[0] != words.rows() || w.shape[0] != 2 || w.shape[1] != e.shape[1]) {
    throw DataError("linear model file: inconsistent matrix shapes");
  }
  return std::make_unique<LinearAvgModel>(
      std::move(words), embed::Matrix(e.shape[0], e.shape[1], e.floats()),
      embed::Matrix(2, w.shape[1], w.floats()), std::array<float, 2>{b[0], b[1]},
      LinearHyper::fromJson(file.header.at("hyper")));
}

std::unique_ptr<LinearAvgModel> trainLinear(const Dataset& dataset,
                                            const embed::EmbeddingModel* pretrained,
                                            const LinearHyper& hyper,
                                            std::uint64_t seed,
                                            LinearTrainStats* stats) {
  hyper.validate();
  if (dataset.empty()) {
    throw DataError("cannot train the linear model on an empty dataset");
  }
  if (pretrained && pretrained->dim() != hyper.dim) {
    throw ConfigError("linear: pretrained vectors have dimension " +
                      std::to_string(pretrained->dim()) + " but dim is " +
                      std::to_string(hyper.dim));
  }

  std::vector<std::string> texts;
  texts.reserve(dataset.size());
  for (const auto& s : dataset) {
    texts.push_back(s.text);
  }
  auto words = WordIndexer::build(texts, std::numeric_limits<std::size_t>::max(),
                                  hyper.minCount);

  const auto dim = static_cast<std::size_t>(hyper.dim);
  embed::Matrix embeddings(words.rows(), dim);
  Rng initRng(deriveSeed(seed, "linear-init"));
  const double bound = 1.0 / hyper.dim;
  for (std::size_t r = 1; r < words.rows(); ++r) {
    auto row = embeddings.row(r);
    for (auto& x : row) {
      x = static_cast<float>(initRng.uniform(-bound, bound));
    }
    if (pretrained) {
      const auto v = pretrained->vector(words.words()[r - 1]);
      if (!v.oov) {
        std::copy(v.values.begin(), v.values.end(), row.begin());
      }
    }
  }
  embed::Matrix weights(2, dim);
  std::array<float, 2> bias{0.0f, 0.0f};
  const bool updateEmbeddings = !(pretrained && hyper.freezeEmbeddings);

  std::vector<std::vector<std::int32_t>> encoded(dataset.size());
  std::vector<int> labels(dataset.size());
  std::uint64_t totalTokens = 0;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    for (auto w : tokenize(dataset[i].text)) {
      const auto id = words.index(w);
      if (id != WordIndexer::kPadding) {
        encoded[i].push_back(id);
      }
    }
    labels[i] = static_cast<int>(dataset[i].label);
    totalTokens += encoded[i].size();
  }

  std::vector<std::size_t> order(dataset.size());
  std::iota(order.begin(), order.end(), 0);
  Rng orderRng(deriveSeed(seed, "linear-order"));
  const double totalWork = static_cast<double>(std::max<std::uint64_t>(1, totalTokens)) *
                           std::max(1, hyper.epochs);
  std::uint64_t processed = 0;
  std::uint64_t sinceUpdate = 0;
  double lr = hyper.learningRate;
  std::vector<double> hidden(dim), grad(dim);

  for (int epoch = 0; epoch < hyper.epochs; ++epoch) {
    orderRng.shuffle(order);
    double lossSum = 0.0;
    std::size_t examples = 0;
    for (auto i : order) {
      const auto& ids = encoded[i];
      if (ids.empty()) {
        continue;
      }
      std::fill(hidden.begin(), hidden.end(), 0.0);
      for (auto id : ids) {
        const auto row = embeddings.row(static_cast<std::size_t>(id));
        for (std::size_t d = 0; d < dim; ++d) {
          hidden[d] += row[d];
        }
      }
      const double inv = 1.0 / static_cast<double>(ids.size());
      for (auto& h : hidden) {
        h *= inv;
      }
      double z[2] = {bias[0], bias[1]};
      for (std::size_t k = 0; k < 2; ++k) {
        const auto w = weights.row(k);
        for (std::size_t d = 0; d < dim; ++d) {
          z[k] += w[d] * hidden[d];
        }
      }
      const auto p = softmax2(z[0], z[1]);
      lossSum += -std::log(std::max(p[static_cast<std::size_t>(labels[i])], 1e-300));
      ++examples;

      std::fill(grad.begin(), grad.end(), 0.0);
      for (std::size_t k = 0; k < 2; ++k) {
        const double g = lr * ((static_cast<int>(k) == labels[i] ? 1.0 : 0.0) - p[k]);
        auto w = weights.row(k);
        for (std::size_t d = 0; d < dim; ++d) {
          grad[d] += g * w[d];
          w[d] += static_cast<float>(g * hidden[d]);
        }
        bias[k] += static_cast<float>(g);
      }
      if (updateEmbeddings) {
        for (auto id : ids) {
          auto row = embeddings.row(static_cast<std::size_t>(id));
          for (std::size_t d = 0; d < dim; ++d) {
            row[d] += static_cast<float>(grad[d] * inv);
          }
        }
      }
      processed += ids.size();
      sinceUpdate += ids.size();
      if (sinceUpdate >= static_cast<std::uint64_t>(hyper.lrUpdateRate)) {
        sinceUpdate = 0;
        lr = hyper.learningRate * std::max(0.0, 1.0 - static_cast<double>(processed) / totalWork);
      }
    }
    if (stats) {
      stats->epochLoss.push_back(examples ? lossSum / static_cast<double>(examples) : 0.0);
    }
  }
  return std::make_unique<LinearAvgModel>(std::move(words), std::move(embeddings),
                                          std::move(weights), bias, hyper);
}

}  // namespace ctelig::classify
