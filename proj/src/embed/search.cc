#include "ctelig/embed/search.h"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ctelig::embed {

OutOfVocabularyError::OutOfVocabularyError(std::string_view word)
    : DataError("word not in vocabulary: '" + std::string(word) + "'") {}

namespace {

double dot(std::span<const float> u, std::span<const float> v) {
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    s += static_cast<double>(u[i]) * v[i];
  }
  return s;
}

double norm(std::span<const float> u) { return std::sqrt(dot(u, u)); }

std::vector<Neighbor> topK(const EmbeddingModel& model,
                           std::vector<std::pair<double, std::size_t>>& scored,
                           std::size_t k, bool descending) {
  k = std::min(k, scored.size());
  auto better = [descending](const auto& x, const auto& y) {
    if (x.first != y.first) {
      return descending ? x.first > y.first : x.first < y.first;
    }
    return x.second < y.second;
  };
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(k),
                    scored.end(), better);
  std::vector<Neighbor> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    out.push_back({model.vocab().word(scored[i].second), scored[i].first});
  }
  return out;
}

struct Query {
  std::vector<float> values;
  std::optional<std::size_t> index;
};

Query lookup(const EmbeddingModel& model, std::string_view word) {
  const auto index = model.vocab().find(word);
  if (index >= 0) {
    const auto row = model.wordVector(static_cast<std::size_t>(index));
    return {std::vector<float>(row.begin(), row.end()),
            static_cast<std::size_t>(index)};
  }
  auto v = model.vector(word);
  if (v.oov) {
    throw OutOfVocabularyError(word);
  }
  return {std::move(v.values), std::nullopt};
}

}  // namespace

double cosine(std::span<const float> u, std::span<const float> v) {
  const double nu = norm(u);
  const double nv = norm(v);
  if (nu == 0.0 || nv == 0.0) {
    return 0.0;
  }
  return dot(u, v) / (nu * nv);
}

std::vector<Neighbor> nearest(const EmbeddingModel& model,
                              std::span<const float> query, std::size_t k,
                              Metric metric, std::optional<std::size_t> exclude) {
  if (k == 0) {
    throw std::invalid_argument("nearest neighbours need k >= 1");
  }
  const double qn = norm(query);
  std::vector<std::pair<double, std::size_t>> scored;
  scored.reserve(model.vocab().size());
  for (std::size_t w = 0; w < model.vocab().size(); ++w) {
    if (exclude && *exclude == w) {
      continue;
    }
    const auto row = model.wordVector(w);
    double score;
    if (metric == Metric::Cosine) {
      const double wn = model.wordNorm(w);
      score = (qn == 0.0 || wn == 0.0) ? 0.0 : dot(query, row) / (qn * wn);
    } else {
      double s = 0.0;
      for (std::size_t i = 0; i < row.size(); ++i) {
        const double d = static_cast<double>(row[i]) - query[i];
        s += d * d;
      }
      score = std::sqrt(s);
    }
    scored.emplace_back(score, w);
  }
  return topK(model, scored, k, metric == Metric::Cosine);
}

std::vector<Neighbor> nearest(const EmbeddingModel& model,
                              std::string_view word, std::size_t k,
                              Metric metric) {
  const auto q = lookup(model, word);
  return nearest(model, q.values, k, metric, q.index);
}

std::vector<Neighbor> analogy3CosMul(const EmbeddingModel& model,
                                     std::string_view a, std::string_view b,
                                     std::string_view c, std::size_t k,
                                     double epsilon) {
  if (k == 0) {
    throw std::invalid_argument("analogy needs k >= 1");
  }
  const auto qa = lookup(model, a);
  const auto qb = lookup(model, b);
  const auto qc = lookup(model, c);
  const double na = norm(qa.values);
  const double nb = norm(qb.values);
  const double nc = norm(qc.values);
  auto shifted = [](double d, double n1, double n2) {
    const double cos = (n1 == 0.0 || n2 == 0.0) ? 0.0 : d / (n1 * n2);
    return (1.0 + cos) / 2.0;
  };
  std::vector<std::pair<double, std::size_t>> scored;
  scored.reserve(model.vocab().size());
  for (std::size_t x = 0; x < model.vocab().size(); ++x) {
    if (qa.index == x || qb.index == x || qc.index == x) {
      continue;
    }
    const auto row = model.wordVector(x);
    const double nx = model.wordNorm(x);
    const double ca = shifted(dot(row, qa.values), nx, na);
    const double cb = shifted(dot(row, qb.values), nx, nb);
    const double cc = shifted(dot(row, qc.values), nx, nc);
    scored.emplace_back(cb * cc / (ca + epsilon), x);
  }
  return topK(model, scored, k, true);
}

}  // namespace ctelig::embed
