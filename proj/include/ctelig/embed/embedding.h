#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ctelig/embed/matrix.h"
#include "ctelig/embed/vocabulary.h"

namespace ctelig::embed {

enum class Architecture { SkipGram, Cbow };

const char* toString(Architecture a) noexcept;

inline constexpr double kSubwordSamplingThreshold = 1e-4;
inline constexpr double kPlainSamplingThreshold = 1e-3;

struct EmbeddingHyper {
  double learningRate = 0.025;
  int dim = 100;
  int window = 5;
  int epochs = 5;
  std::uint64_t minCount = 5;
  int negatives = 5;
  double samplingThreshold = kSubwordSamplingThreshold;
  // Tokens between learning-rate refreshes.
  int lrUpdateRate = 100;
  Architecture architecture = Architecture::SkipGram;
  bool subwords = true;
  int minn = 3;
  int maxn = 6;
  std::int64_t buckets = 2'000'000;
  SubsamplingRule subsampling = SubsamplingRule::Composite;
  double negativePower = 0.75;
  // The learning rate decays linearly to this fraction of its start value.
  double minLearningRateFraction = 1e-4;
  // More than one thread trains lock-free and is not reproducible.
  unsigned threads = 1;

  // Throws ConfigError.
  void validate() const;
};

struct WordVector {
  std::vector<float> values;
  bool oov = false;
};

// Trained word embeddings. With subwords enabled, the vector of a word is its
// own row plus the mean of its char n-gram bucket rows; an unknown word is
// the mean of its n-gram rows alone.
class EmbeddingModel {
 public:
  EmbeddingModel() = default;
  EmbeddingModel(Vocabulary vocab, int dim, Architecture architecture,
                 bool subwords, int minn, int maxn, std::int64_t buckets);

  int dim() const { return dim_; }
  const Vocabulary& vocab() const { return vocab_; }
  Architecture architecture() const { return architecture_; }
  bool hasSubwords() const { return subwords_; }
  int minn() const { return minn_; }
  int maxn() const { return maxn_; }
  std::int64_t bucketCount() const { return bucketCount_; }

  Matrix& input() { return input_; }
  const Matrix& input() const { return input_; }
  Matrix& output() { return output_; }
  const Matrix& output() const { return output_; }
  Matrix& buckets() { return buckets_; }
  const Matrix& buckets() const { return buckets_; }

  // Bucket rows of a vocabulary word (cached) or of any string.
  const std::vector<std::int32_t>& wordBuckets(std::size_t index) const {
    return wordBuckets_[index];
  }
  std::vector<std::int32_t> bucketsOf(std::string_view word) const;

  WordVector vector(std::string_view word) const;

  // Composed vector of vocabulary word i and its norm. Valid after
  // refresh(), which training and loading call.
  std::span<const float> wordVector(std::size_t index) const {
    return words_.row(index);
  }
  double wordNorm(std::size_t index) const { return norms_[index]; }
  void refresh();

 private:
  void composeInto(std::size_t index, std::span<float> out) const;

  Vocabulary vocab_;
  int dim_ = 0;
  Architecture architecture_ = Architecture::SkipGram;
  bool subwords_ = false;
  int minn_ = 3;
  int maxn_ = 6;
  std::int64_t bucketCount_ = 0;
  Matrix input_;
  Matrix output_;
  Matrix buckets_;
  std::vector<std::vector<std::int32_t>> wordBuckets_;
  Matrix words_;
  std::vector<double> norms_;
};

// Mean of token vectors, skipping unknown tokens. oov is set when every token
// was unknown (the result is then the zero vector). Throws
// std::invalid_argument on empty text.
WordVector sentenceVector(const EmbeddingModel& model, std::string_view text);

}  // namespace ctelig::embed
