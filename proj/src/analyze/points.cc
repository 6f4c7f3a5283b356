#include "ctelig/analyze/points.h"

#include <algorithm>

#include "ctelig/common/errors.h"

namespace ctelig::analyze {

namespace {

WordPoints fromIndices(const embed::EmbeddingModel& model,
                       const std::vector<std::size_t>& indices) {
  WordPoints out;
  out.points.resize(static_cast<Eigen::Index>(indices.size()), model.dim());
  for (std::size_t r = 0; r < indices.size(); ++r) {
    out.words.push_back(model.vocab().word(indices[r]));
    auto v = model.wordVector(indices[r]);
    for (int c = 0; c < model.dim(); ++c) {
      out.points(static_cast<Eigen::Index>(r), c) = v[c];
    }
  }
  return out;
}

}  // namespace

WordPoints vocabularyPoints(const embed::EmbeddingModel& model,
                            std::size_t limit) {
  const std::size_t n =
      limit == 0 ? model.vocab().size() : std::min(limit, model.vocab().size());
  std::vector<std::size_t> indices(n);
  for (std::size_t i = 0; i < n; ++i) {
    indices[i] = i;
  }
  return fromIndices(model, indices);
}

WordPoints selectedPoints(const embed::EmbeddingModel& model,
                          std::span<const std::string> words) {
  std::vector<std::size_t> indices;
  for (const auto& w : words) {
    const auto i = model.vocab().find(w);
    if (i < 0) {
      throw DataError("word not in the embedding vocabulary: " + w);
    }
    indices.push_back(static_cast<std::size_t>(i));
  }
  return fromIndices(model, indices);
}

}  // namespace ctelig::analyze
