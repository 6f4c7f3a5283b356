#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ctelig/common/errors.h"
#include "ctelig/embed/embedding.h"

namespace ctelig::embed {

class OutOfVocabularyError : public DataError {
 public:
  explicit OutOfVocabularyError(std::string_view word);
};

enum class Metric { Cosine, Euclidean };

struct Neighbor {
  std::string word;
  // Cosine similarity (descending) or Euclidean distance (ascending).
  double score = 0.0;
};

double cosine(std::span<const float> u, std::span<const float> v);

// Exact scan over the vocabulary. Ties keep vocabulary order.
std::vector<Neighbor> nearest(const EmbeddingModel& model,
                              std::span<const float> query, std::size_t k,
                              Metric metric,
                              std::optional<std::size_t> exclude = std::nullopt);

// The query word itself is excluded. Unknown words are an error unless the
// model has subwords.
std::vector<Neighbor> nearest(const EmbeddingModel& model,
                              std::string_view word, std::size_t k,
                              Metric metric);

inline constexpr double kCosMulEpsilon = 1e-3;

// "a is to b as c is to ?": ranks x outside {a, b, c} by
//   cos'(x, b) * cos'(x, c) / (cos'(x, a) + epsilon),  cos' = (1 + cos) / 2.
// In "tamoxifen - breast + prostate" form, a = breast, b = tamoxifen,
// c = prostate.
std::vector<Neighbor> analogy3CosMul(const EmbeddingModel& model,
                                     std::string_view a, std::string_view b,
                                     std::string_view c, std::size_t k,
                                     double epsilon = kCosMulEpsilon);

}  // namespace ctelig::embed
