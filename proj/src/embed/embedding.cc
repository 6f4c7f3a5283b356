#include "ctelig/embed/embedding.h"

#include <cmath>
#include <stdexcept>

#include "ctelig/common/errors.h"
#include "ctelig/embed/subwords.h"

namespace ctelig::embed {

const char* toString(Architecture a) noexcept {
  return a == Architecture::SkipGram ? "skipgram" : "cbow";
}

void EmbeddingHyper::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) {
      throw ConfigError(std::string("embedding hyperparameter: ") + what);
    }
  };
  require(learningRate > 0, "learning rate must be positive");
  require(dim > 0, "dim must be positive");
  require(window >= 1, "window must be at least 1");
  require(epochs >= 0, "epochs must be non-negative");
  require(minCount >= 1, "min_count must be at least 1");
  require(negatives >= 0, "negatives must be non-negative");
  require(samplingThreshold >= 0, "sampling threshold must be non-negative");
  require(lrUpdateRate >= 1, "lr_update_rate must be at least 1");
  require(negativePower > 0, "negative power must be positive");
  require(minLearningRateFraction > 0 && minLearningRateFraction <= 1,
          "min learning rate fraction must lie in (0, 1]");
  if (subwords) {
    require(minn >= 1 && maxn >= minn, "need 1 <= minn <= maxn");
    require(buckets > 0, "buckets must be positive with subwords");
  }
}

EmbeddingModel::EmbeddingModel(Vocabulary vocab, int dim,
                               Architecture architecture, bool subwords,
                               int minn, int maxn, std::int64_t buckets)
    : vocab_(std::move(vocab)),
      dim_(dim),
      architecture_(architecture),
      subwords_(subwords),
      minn_(minn),
      maxn_(maxn),
      bucketCount_(subwords ? buckets : 0),
      input_(vocab_.size(), static_cast<std::size_t>(dim)),
      output_(vocab_.size(), static_cast<std::size_t>(dim)) {
  if (subwords_) {
    buckets_ = Matrix(static_cast<std::size_t>(bucketCount_),
                      static_cast<std::size_t>(dim));
    wordBuckets_.reserve(vocab_.size());
    for (const auto& w : vocab_.words()) {
      wordBuckets_.push_back(ngramBuckets(w, minn_, maxn_, bucketCount_));
    }
  } else {
    wordBuckets_.assign(vocab_.size(), {});
  }
}

std::vector<std::int32_t> EmbeddingModel::bucketsOf(std::string_view word) const {
  if (!subwords_) {
    return {};
  }
  return ngramBuckets(word, minn_, maxn_, bucketCount_);
}

void EmbeddingModel::composeInto(std::size_t index, std::span<float> out) const {
  const auto row = input_.row(index);
  std::copy(row.begin(), row.end(), out.begin());
  const auto& ids = wordBuckets_[index];
  if (ids.empty()) {
    return;
  }
  const float scale = 1.0f / static_cast<float>(ids.size());
  for (auto id : ids) {
    const auto b = buckets_.row(static_cast<std::size_t>(id));
    for (int i = 0; i < dim_; ++i) {
      out[i] += scale * b[i];
    }
  }
}

void EmbeddingModel::refresh() {
  words_ = Matrix(vocab_.size(), static_cast<std::size_t>(dim_));
  norms_.assign(vocab_.size(), 0.0);
  for (std::size_t w = 0; w < vocab_.size(); ++w) {
    auto row = words_.row(w);
    composeInto(w, row);
    double n = 0.0;
    for (float x : row) {
      n += static_cast<double>(x) * x;
    }
    norms_[w] = std::sqrt(n);
  }
}

WordVector EmbeddingModel::vector(std::string_view word) const {
  WordVector result;
  result.values.assign(static_cast<std::size_t>(dim_), 0.0f);
  const auto index = vocab_.find(word);
  if (index >= 0) {
    if (words_.rows() == vocab_.size()) {
      const auto row = words_.row(static_cast<std::size_t>(index));
      std::copy(row.begin(), row.end(), result.values.begin());
    } else {
      composeInto(static_cast<std::size_t>(index), result.values);
    }
    return result;
  }
  if (!subwords_) {
    result.oov = true;
    return result;
  }
  const auto ids = bucketsOf(word);
  if (ids.empty()) {
    result.oov = true;
    return result;
  }
  const float scale = 1.0f / static_cast<float>(ids.size());
  for (auto id : ids) {
    const auto b = buckets_.row(static_cast<std::size_t>(id));
    for (int i = 0; i < dim_; ++i) {
      result.values[i] += scale * b[i];
    }
  }
  return result;
}

WordVector sentenceVector(const EmbeddingModel& model, std::string_view text) {
  WordVector result;
  result.values.assign(static_cast<std::size_t>(model.dim()), 0.0f);
  std::size_t used = 0;
  std::size_t tokens = 0;
  std::vector<double> acc(static_cast<std::size_t>(model.dim()), 0.0);
  std::size_t pos = 0;
  while (pos < text.size()) {
    while (pos < text.size() && text[pos] == ' ') {
      ++pos;
    }
    const auto start = pos;
    while (pos < text.size() && text[pos] != ' ') {
      ++pos;
    }
    if (pos == start) {
      continue;
    }
    ++tokens;
    const auto v = model.vector(text.substr(start, pos - start));
    if (v.oov) {
      continue;
    }
    ++used;
    for (std::size_t i = 0; i < acc.size(); ++i) {
      acc[i] += v.values[i];
    }
  }
  if (tokens == 0) {
    throw std::invalid_argument("sentence vector of empty text");
  }
  if (used == 0) {
    result.oov = true;
    return result;
  }
  for (std::size_t i = 0; i < acc.size(); ++i) {
    result.values[i] = static_cast<float>(acc[i] / static_cast<double>(used));
  }
  return result;
}

}  // namespace ctelig::embed
