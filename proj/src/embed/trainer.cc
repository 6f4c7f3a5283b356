#include "ctelig/embed/trainer.h"

#include <algorithm>
#include <atomic>
#include <thread>

#include "ctelig/common/errors.h"
#include "ctelig/common/random.h"
#include "ctelig/embed/sgns.h"

namespace ctelig::embed {

namespace {

struct EncodedCorpus {
  std::vector<std::int32_t> tokens;
  std::vector<std::size_t> offsets;  // sentence i = [offsets[i], offsets[i+1])
};

EncodedCorpus encode(std::span<const std::string> corpus, const Vocabulary& vocab) {
  EncodedCorpus enc;
  enc.offsets.push_back(0);
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
        const auto id = vocab.find(std::string_view(line).substr(start, pos - start));
        if (id >= 0) {
          enc.tokens.push_back(id);
        }
      }
    }
    enc.offsets.push_back(enc.tokens.size());
  }
  return enc;
}

class Worker {
 public:
  Worker(EmbeddingModel& model, const EmbeddingHyper& hyper,
         std::atomic<std::uint64_t>& progress, std::uint64_t totalWork,
         std::uint64_t seed)
      : model_(model),
        hyper_(hyper),
        progress_(progress),
        totalWork_(totalWork),
        rng_(seed),
        dim_(static_cast<std::size_t>(hyper.dim)),
        hidden_(dim_),
        grad_(dim_) {}

  void run(const EncodedCorpus& corpus, std::size_t first, std::size_t last) {
    std::vector<std::int32_t> sentence;
    std::uint64_t pending = 0;
    for (std::size_t s = first; s < last; ++s) {
      sentence.clear();
      const auto begin = corpus.offsets[s];
      const auto end = corpus.offsets[s + 1];
      for (auto i = begin; i < end; ++i) {
        const auto w = corpus.tokens[i];
        if (rng_.uniform() < model_.vocab().keepProbability(w)) {
          sentence.push_back(w);
        }
      }
      if (hyper_.architecture == Architecture::SkipGram) {
        skipGram(sentence);
      } else {
        cbow(sentence);
      }
      pending += end - begin;
      if (pending >= static_cast<std::uint64_t>(hyper_.lrUpdateRate)) {
        refreshRate(pending);
        pending = 0;
      }
    }
    refreshRate(pending);
  }

  double lossSum() const { return lossSum_; }
  std::uint64_t pairs() const { return pairs_; }
  void resetLoss() {
    lossSum_ = 0.0;
    pairs_ = 0;
  }
  void startEpoch() {
    if (lr_ == 0.0) {
      refreshRate(0);
    }
  }

 private:
  void refreshRate(std::uint64_t processed) {
    const auto done = progress_.fetch_add(processed) + processed;
    const double fraction =
        totalWork_ == 0 ? 1.0
                        : static_cast<double>(done) / static_cast<double>(totalWork_);
    lr_ = hyper_.learningRate *
          std::max(hyper_.minLearningRateFraction, 1.0 - fraction);
  }

  // hidden_ += scale * composed input vector of word w
  void addInput(std::int32_t w, float scale) {
    const auto row = model_.input().row(static_cast<std::size_t>(w));
    for (std::size_t i = 0; i < dim_; ++i) {
      hidden_[i] += scale * row[i];
    }
    const auto& ids = model_.wordBuckets(static_cast<std::size_t>(w));
    if (ids.empty()) {
      return;
    }
    const float s = scale / static_cast<float>(ids.size());
    for (auto id : ids) {
      const auto b = model_.buckets().row(static_cast<std::size_t>(id));
      for (std::size_t i = 0; i < dim_; ++i) {
        hidden_[i] += s * b[i];
      }
    }
  }

  void applyGrad(std::int32_t w) {
    auto row = model_.input().row(static_cast<std::size_t>(w));
    for (std::size_t i = 0; i < dim_; ++i) {
      row[i] += grad_[i];
    }
    const auto& ids = model_.wordBuckets(static_cast<std::size_t>(w));
    if (ids.empty()) {
      return;
    }
    const float s = 1.0f / static_cast<float>(ids.size());
    for (auto id : ids) {
      auto b = model_.buckets().row(static_cast<std::size_t>(id));
      for (std::size_t i = 0; i < dim_; ++i) {
        b[i] += s * grad_[i];
      }
    }
  }

  void step(std::int32_t target) {
    targets_.clear();
    targets_.push_back(model_.output().row(static_cast<std::size_t>(target)));
    const auto vocabSize = model_.vocab().size();
    for (int n = 0; n < hyper_.negatives && vocabSize > 1; ++n) {
      std::int32_t neg = target;
      for (int attempt = 0; attempt < 64 && neg == target; ++attempt) {
        neg = model_.vocab().sampleNegative(rng_);
      }
      if (neg != target) {
        targets_.push_back(model_.output().row(static_cast<std::size_t>(neg)));
      }
    }
    std::fill(grad_.begin(), grad_.end(), 0.0f);
    lossSum_ += negativeSamplingStep<float>(
        hidden_, targets_, static_cast<float>(lr_), grad_);
    ++pairs_;
  }

  void skipGram(const std::vector<std::int32_t>& sentence) {
    const auto n = static_cast<std::ptrdiff_t>(sentence.size());
    for (std::ptrdiff_t pos = 0; pos < n; ++pos) {
      const auto b = static_cast<std::ptrdiff_t>(
          1 + rng_.below(static_cast<std::uint64_t>(hyper_.window)));
      for (auto c = pos - b; c <= pos + b; ++c) {
        if (c < 0 || c >= n || c == pos) {
          continue;
        }
        std::fill(hidden_.begin(), hidden_.end(), 0.0f);
        addInput(sentence[pos], 1.0f);
        step(sentence[c]);
        applyGrad(sentence[pos]);
      }
    }
  }

  void cbow(const std::vector<std::int32_t>& sentence) {
    const auto n = static_cast<std::ptrdiff_t>(sentence.size());
    std::vector<std::int32_t> context;
    for (std::ptrdiff_t pos = 0; pos < n; ++pos) {
      const auto b = static_cast<std::ptrdiff_t>(
          1 + rng_.below(static_cast<std::uint64_t>(hyper_.window)));
      context.clear();
      for (auto c = pos - b; c <= pos + b; ++c) {
        if (c >= 0 && c < n && c != pos) {
          context.push_back(sentence[c]);
        }
      }
      if (context.empty()) {
        continue;
      }
      std::fill(hidden_.begin(), hidden_.end(), 0.0f);
      const float scale = 1.0f / static_cast<float>(context.size());
      for (auto w : context) {
        addInput(w, scale);
      }
      step(sentence[pos]);
      for (auto w : context) {
        applyGrad(w);
      }
    }
  }

  EmbeddingModel& model_;
  const EmbeddingHyper& hyper_;
  std::atomic<std::uint64_t>& progress_;
  std::uint64_t totalWork_;
  Rng rng_;
  std::size_t dim_;
  std::vector<float> hidden_;
  std::vector<float> grad_;
  std::vector<std::span<float>> targets_;
  double lr_ = 0.0;
  double lossSum_ = 0.0;
  std::uint64_t pairs_ = 0;
};

void initialize(EmbeddingModel& model, Rng& rng) {
  const float bound = 1.0f / static_cast<float>(model.dim());
  for (auto& x : model.input().data()) {
    x = static_cast<float>(rng.uniform(-bound, bound));
  }
  for (auto& x : model.buckets().data()) {
    x = static_cast<float>(rng.uniform(-bound, bound));
  }
}

}  // namespace

TrainResult trainEmbeddings(std::span<const std::string> corpus,
                            const EmbeddingHyper& hyper, std::uint64_t seed) {
  hyper.validate();
  Vocabulary::Options vocabOptions;
  vocabOptions.minCount = hyper.minCount;
  vocabOptions.samplingThreshold = hyper.samplingThreshold;
  vocabOptions.subsampling = hyper.subsampling;
  vocabOptions.negativePower = hyper.negativePower;
  auto vocab = Vocabulary::build(corpus, vocabOptions);

  const auto encoded = encode(corpus, vocab);
  if (encoded.tokens.size() < static_cast<std::size_t>(hyper.window) + 1) {
    throw DataError("corpus has " + std::to_string(encoded.tokens.size()) +
                    " in-vocabulary tokens, fewer than one window of " +
                    std::to_string(hyper.window + 1));
  }

  TrainResult result{EmbeddingModel(std::move(vocab), hyper.dim,
                                    hyper.architecture, hyper.subwords,
                                    hyper.minn, hyper.maxn, hyper.buckets),
                     {}};
  auto& model = result.model;
  Rng initRng(deriveSeed(seed, "embedding-init"));
  initialize(model, initRng);

  const std::size_t sentences = encoded.offsets.size() - 1;
  const std::uint64_t totalWork =
      static_cast<std::uint64_t>(hyper.epochs) * encoded.tokens.size();
  std::atomic<std::uint64_t> progress{0};
  const unsigned threads =
      std::max(1u, std::min<unsigned>(hyper.threads,
                                      static_cast<unsigned>(std::max<std::size_t>(1, sentences))));
  std::vector<Worker> workers;
  workers.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    workers.emplace_back(model, hyper, progress, totalWork,
                         deriveSeed(seed, "embedding-worker-" + std::to_string(t)));
  }

  for (int epoch = 0; epoch < hyper.epochs; ++epoch) {
    for (auto& w : workers) {
      w.resetLoss();
      w.startEpoch();
    }
    if (threads == 1) {
      workers[0].run(encoded, 0, sentences);
    } else {
      std::vector<std::thread> pool;
      for (unsigned t = 0; t < threads; ++t) {
        const std::size_t first = sentences * t / threads;
        const std::size_t last = sentences * (t + 1) / threads;
        pool.emplace_back([&, t, first, last] { workers[t].run(encoded, first, last); });
      }
      for (auto& th : pool) {
        th.join();
      }
    }
    double loss = 0.0;
    std::uint64_t pairs = 0;
    for (const auto& w : workers) {
      loss += w.lossSum();
      pairs += w.pairs();
    }
    result.stats.epochLoss.push_back(pairs == 0 ? 0.0 : loss / static_cast<double>(pairs));
    result.stats.updates += pairs;
  }
  model.refresh();
  return result;
}

}  // namespace ctelig::embed
