#include "ctelig/classify/encoder.h"

#include <algorithm>
#include <thread>

#include "ctelig/common/hashing.h"
#include "ctelig/embed/serialization.h"

namespace ctelig::classify {

std::vector<std::string_view> tokenize(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    while (pos < text.size() && text[pos] == ' ') {
      ++pos;
    }
    const auto start = pos;
    while (pos < text.size() && text[pos] != ' ') {
      ++pos;
    }
    if (pos > start) {
      out.push_back(text.substr(start, pos - start));
    }
  }
  return out;
}

WordIndexer WordIndexer::build(std::span<const std::string> statements,
                               std::size_t maxWords,
                               std::uint64_t minCount) {
  std::unordered_map<std::string, std::uint64_t> counts;
  for (const auto& s : statements) {
    for (auto t : tokenize(s)) {
      ++counts[std::string(t)];
    }
  }
  std::vector<std::pair<std::string, std::uint64_t>> sorted;
  for (auto& [w, c] : counts) {
    if (c >= minCount) {
      sorted.emplace_back(w, c);
    }
  }
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  if (sorted.size() > maxWords) {
    sorted.resize(maxWords);
  }
  std::vector<std::string> words;
  words.reserve(sorted.size());
  for (auto& [w, c] : sorted) {
    words.push_back(std::move(w));
  }
  return fromWords(std::move(words));
}

WordIndexer WordIndexer::fromWords(std::vector<std::string> words) {
  WordIndexer out;
  out.words_ = std::move(words);
  out.index_.reserve(out.words_.size());
  for (std::size_t i = 0; i < out.words_.size(); ++i) {
    out.index_.emplace(out.words_[i], static_cast<std::int32_t>(i + 1));
  }
  return out;
}

std::int32_t WordIndexer::index(std::string_view word) const {
  const auto it = index_.find(std::string(word));
  return it == index_.end() ? kPadding : it->second;
}

std::vector<std::int32_t> WordIndexer::encode(std::string_view text,
                                              std::size_t length) const {
  std::vector<std::int32_t> out(length, kPadding);
  const auto tokens = tokenize(text);
  const auto n = std::min(length, tokens.size());
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = index(tokens[i]);
  }
  return out;
}

std::size_t WordIndexer::knownTokens(std::string_view text,
                                     std::size_t length) const {
  const auto tokens = tokenize(text);
  const auto n = std::min(length, tokens.size());
  std::size_t known = 0;
  for (std::size_t i = 0; i < n; ++i) {
    known += index(tokens[i]) != kPadding;
  }
  return known;
}

EmbeddingSource EmbeddingSource::load(const std::filesystem::path& path) {
  EmbeddingSource source;
  source.model = std::make_shared<const embed::EmbeddingModel>(
      embed::loadEmbeddings(path));
  source.path = path;
  source.checksum = toHex(fileChecksum(path));
  return source;
}

EmbeddingSource EmbeddingSource::inMemory(embed::EmbeddingModel model) {
  EmbeddingSource source;
  source.model = std::make_shared<const embed::EmbeddingModel>(std::move(model));
  return source;
}

Eigen::VectorXd sentenceFeatures(const embed::EmbeddingModel& model,
                                 std::string_view text, bool* oov) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(model.dim());
  std::size_t used = 0;
  for (auto token : tokenize(text)) {
    const auto v = model.vector(token);
    if (v.oov) {
      continue;
    }
    ++used;
    for (int i = 0; i < model.dim(); ++i) {
      out[i] += v.values[static_cast<std::size_t>(i)];
    }
  }
  if (used > 0) {
    out /= static_cast<double>(used);
  }
  if (oov) {
    *oov = used == 0;
  }
  return out;
}

FeatureMatrix datasetFeatures(const embed::EmbeddingModel& model,
                              const Dataset& dataset, unsigned threads) {
  FeatureMatrix out(static_cast<Eigen::Index>(dataset.size()), model.dim());
  auto work = [&](std::size_t first, std::size_t last) {
    for (std::size_t i = first; i < last; ++i) {
      out.row(static_cast<Eigen::Index>(i)) =
          sentenceFeatures(model, dataset[i].text).transpose();
    }
  };
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(dataset.size())));
  if (threads <= 1) {
    work(0, dataset.size());
    return out;
  }
  std::vector<std::thread> pool;
  const std::size_t chunk = (dataset.size() + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    const auto first = std::min(dataset.size(), t * chunk);
    const auto last = std::min(dataset.size(), first + chunk);
    pool.emplace_back(work, first, last);
  }
  for (auto& th : pool) {
    th.join();
  }
  return out;
}

}  // namespace ctelig::classify
