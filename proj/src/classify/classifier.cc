#include "ctelig/classify/classifier.h"

#include <algorithm>
#include <thread>

#include "ctelig/common/errors.h"

namespace ctelig::classify {

const char* toString(ModelKind kind) noexcept {
  switch (kind) {
    case ModelKind::Linear:
      return "linear";
    case ModelKind::Cnn:
      return "cnn";
    case ModelKind::Svm:
      return "svm";
    case ModelKind::Knn:
      return "knn";
  }
  return "unknown";
}

ModelKind parseModelKind(std::string_view name) {
  for (auto kind : {ModelKind::Linear, ModelKind::Cnn, ModelKind::Svm, ModelKind::Knn}) {
    if (name == toString(kind)) {
      return kind;
    }
  }
  throw ConfigError("unknown model kind '" + std::string(name) +
                    "' (expected linear, cnn, svm or knn)");
}

std::vector<Prediction> Classifier::predictAll(std::span<const std::string> texts,
                                               unsigned threads) const {
  std::vector<Prediction> out(texts.size());
  auto work = [&](std::size_t first, std::size_t last) {
    for (std::size_t i = first; i < last; ++i) {
      out[i] = predict(texts[i]);
    }
  };
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(texts.size())));
  if (threads <= 1) {
    work(0, texts.size());
    return out;
  }
  std::vector<std::thread> pool;
  const std::size_t chunk = (texts.size() + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    const auto first = std::min(texts.size(), t * chunk);
    pool.emplace_back(work, first, std::min(texts.size(), first + chunk));
  }
  for (auto& th : pool) {
    th.join();
  }
  return out;
}

std::vector<Label> Classifier::predictLabels(const Dataset& dataset,
                                             unsigned threads) const {
  std::vector<std::string> texts;
  texts.reserve(dataset.size());
  for (const auto& s : dataset) {
    texts.push_back(s.text);
  }
  std::vector<Label> labels;
  labels.reserve(texts.size());
  for (const auto& p : predictAll(texts, threads)) {
    labels.push_back(p.label);
  }
  return labels;
}

}  // namespace ctelig::classify
