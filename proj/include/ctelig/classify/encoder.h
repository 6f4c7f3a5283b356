#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ctelig/embed/embedding.h"
#include "ctelig/textprep/dataset.h"

namespace ctelig::classify {

using textprep::Dataset;

using FeatureMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Maps the most frequent training words to indices 1..N. Index 0 is shared by
// padding and every other word.
class WordIndexer {
 public:
  static constexpr std::int32_t kPadding = 0;

  WordIndexer() = default;
  // Keeps at most maxWords words occurring at least minCount times, by
  // descending count then lexicographically.
  static WordIndexer build(std::span<const std::string> statements,
                           std::size_t maxWords, std::uint64_t minCount = 1);
  static WordIndexer fromWords(std::vector<std::string> words);

  // Number of rows an embedding table needs, padding included.
  std::size_t rows() const { return words_.size() + 1; }
  const std::vector<std::string>& words() const { return words_; }
  std::int32_t index(std::string_view word) const;

  // Truncates to the first length tokens and pads at the end.
  std::vector<std::int32_t> encode(std::string_view text,
                                   std::size_t length) const;
  // Number of known tokens among the first length tokens.
  std::size_t knownTokens(std::string_view text, std::size_t length) const;

 private:
  std::vector<std::string> words_;
  std::unordered_map<std::string, std::int32_t> index_;
};

// Splits on single spaces, skipping empty pieces.
std::vector<std::string_view> tokenize(std::string_view text);

// Word embeddings a vector-based classifier reads at prediction time, with
// the file they came from so model files can name and verify them.
struct EmbeddingSource {
  std::shared_ptr<const embed::EmbeddingModel> model;
  std::filesystem::path path;
  std::string checksum;  // FNV-1a 64 of the file, hex; empty when in memory

  static EmbeddingSource load(const std::filesystem::path& path);
  static EmbeddingSource inMemory(embed::EmbeddingModel model);
};

// Averaged sentence vector in double precision. oov is set when no token was
// known, in which case the vector is zero.
Eigen::VectorXd sentenceFeatures(const embed::EmbeddingModel& model,
                                 std::string_view text, bool* oov = nullptr);

// Row i holds the features of statement i.
FeatureMatrix datasetFeatures(const embed::EmbeddingModel& model,
                                const Dataset& dataset, unsigned threads = 1);

}  // namespace ctelig::classify
