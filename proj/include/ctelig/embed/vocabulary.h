#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ctelig/common/random.h"

namespace ctelig::embed {

enum class SubsamplingRule {
  // keep = min(1, sqrt(t/f) + t/f)
  Composite,
  // keep = min(1, sqrt(t/f)), i.e. discard with probability 1 - sqrt(t/f)
  SquareRoot,
};

double keepProbability(double frequency, double threshold,
                       SubsamplingRule rule = SubsamplingRule::Composite);

// Words kept for training, ordered by descending count (ties
// lexicographically), with subsampling and negative-sampling tables.
class Vocabulary {
 public:
  struct Options {
    std::uint64_t minCount = 5;
    double samplingThreshold = 1e-4;
    SubsamplingRule subsampling = SubsamplingRule::Composite;
    double negativePower = 0.75;
  };

  Vocabulary() = default;

  // Throws DataError for an empty corpus or an empty result.
  static Vocabulary build(std::span<const std::string> corpus,
                          const Options& options);
  // Counts unknown: subsampling disabled, uniform negatives.
  static Vocabulary fromWords(std::vector<std::string> words);

  std::size_t size() const { return words_.size(); }
  const std::string& word(std::size_t i) const { return words_[i]; }
  const std::vector<std::string>& words() const { return words_; }
  std::uint64_t count(std::size_t i) const { return counts_[i]; }
  // -1 when absent.
  std::int32_t find(std::string_view word) const;
  bool contains(std::string_view word) const { return find(word) >= 0; }

  double keepProbability(std::size_t i) const { return keep_[i]; }
  // Sum of counts of kept words.
  std::uint64_t totalWords() const { return totalWords_; }
  std::span<const double> negativeDistribution() const { return negative_; }
  std::int32_t sampleNegative(Rng& rng) const;

 private:
  void finish(const Options& options);

  std::vector<std::string> words_;
  std::vector<std::uint64_t> counts_;
  std::unordered_map<std::string, std::int32_t> index_;
  std::vector<double> keep_;
  std::vector<double> negative_;
  std::vector<double> cumulative_;
  std::uint64_t totalWords_ = 0;
};

}  // namespace ctelig::embed
