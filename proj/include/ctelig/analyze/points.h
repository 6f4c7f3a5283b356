#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>
#include <vector>

#include "ctelig/embed/embedding.h"

namespace ctelig::analyze {

// One point per row.
using Points = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Words chosen for an analysis with their composed vectors.
struct WordPoints {
  std::vector<std::string> words;
  Points points;
};

// The first `limit` vocabulary words (most frequent first), or all of them.
WordPoints vocabularyPoints(const embed::EmbeddingModel& model,
                            std::size_t limit);

// Throws DataError naming the first word missing from the vocabulary.
WordPoints selectedPoints(const embed::EmbeddingModel& model,
                          std::span<const std::string> words);

}  // namespace ctelig::analyze
