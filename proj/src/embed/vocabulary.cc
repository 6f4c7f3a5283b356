#include "ctelig/embed/vocabulary.h"

#include <algorithm>
#include <cmath>

#include "ctelig/common/errors.h"

namespace ctelig::embed {

double keepProbability(double frequency, double threshold,
                       SubsamplingRule rule) {
  if (threshold <= 0.0 || frequency <= 0.0) {
    return 1.0;
  }
  const double ratio = threshold / frequency;
  const double keep = rule == SubsamplingRule::Composite
                          ? std::sqrt(ratio) + ratio
                          : std::sqrt(ratio);
  return std::min(1.0, keep);
}

Vocabulary Vocabulary::build(std::span<const std::string> corpus,
                             const Options& options) {
  std::unordered_map<std::string, std::uint64_t> counts;
  std::uint64_t tokens = 0;
  for (const auto& line : corpus) {
    std::size_t pos = 0;
    while (pos < line.size()) {
      while (pos < line.size() && line[pos] == ' ') {
        ++pos;
      }
      const auto start = pos;
      while (pos < line.size() && line[pos] != ' ') {
        ++pos;
      }
      if (pos > start) {
        ++counts[line.substr(start, pos - start)];
        ++tokens;
      }
    }
  }
  if (tokens == 0) {
    throw DataError("cannot build a vocabulary from an empty corpus");
  }
  std::vector<std::pair<std::string, std::uint64_t>> kept;
  for (auto& [w, c] : counts) {
    if (c >= options.minCount) {
      kept.emplace_back(w, c);
    }
  }
  if (kept.empty()) {
    throw DataError("no word reaches min_count=" +
                    std::to_string(options.minCount));
  }
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  Vocabulary v;
  for (auto& [w, c] : kept) {
    v.words_.push_back(w);
    v.counts_.push_back(c);
  }
  v.finish(options);
  return v;
}

Vocabulary Vocabulary::fromWords(std::vector<std::string> words) {
  Vocabulary v;
  v.words_ = std::move(words);
  v.counts_.assign(v.words_.size(), 0);
  Options options;
  options.samplingThreshold = 0.0;
  v.finish(options);
  return v;
}

void Vocabulary::finish(const Options& options) {
  index_.clear();
  for (std::size_t i = 0; i < words_.size(); ++i) {
    index_.emplace(words_[i], static_cast<std::int32_t>(i));
  }
  totalWords_ = 0;
  for (auto c : counts_) {
    totalWords_ += c;
  }
  keep_.resize(words_.size());
  negative_.resize(words_.size());
  double z = 0.0;
  for (std::size_t i = 0; i < words_.size(); ++i) {
    const double f = totalWords_ == 0 ? 0.0
                                      : static_cast<double>(counts_[i]) /
                                            static_cast<double>(totalWords_);
    keep_[i] = embed::keepProbability(f, options.samplingThreshold,
                                      options.subsampling);
    negative_[i] = totalWords_ == 0
                       ? 1.0
                       : std::pow(static_cast<double>(counts_[i]),
                                  options.negativePower);
    z += negative_[i];
  }
  cumulative_.resize(words_.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < words_.size(); ++i) {
    negative_[i] /= z;
    acc += negative_[i];
    cumulative_[i] = acc;
  }
}

std::int32_t Vocabulary::find(std::string_view word) const {
  const auto it = index_.find(std::string(word));
  return it == index_.end() ? -1 : it->second;
}

std::int32_t Vocabulary::sampleNegative(Rng& rng) const {
  const double u = rng.uniform() * cumulative_.back();
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  const auto i = std::min<std::ptrdiff_t>(it - cumulative_.begin(),
                                          static_cast<std::ptrdiff_t>(size()) - 1);
  return static_cast<std::int32_t>(i);
}

}  // namespace ctelig::embed
