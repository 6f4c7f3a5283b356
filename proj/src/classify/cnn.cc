#include "ctelig/classify/cnn.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>

#include "ctelig/common/errors.h"

namespace ctelig::classify {

namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::RowVectorXd;

std::vector<MatrixXd> zerosLike(const std::vector<MatrixXd>& params) {
  std::vector<MatrixXd> out;
  out.reserve(params.size());
  for (const auto& p : params) {
    out.push_back(MatrixXd::Zero(p.rows(), p.cols()));
  }
  return out;
}

}  // namespace

void CnnHyper::validate() const {
  if (sequenceLength < 1) throw ConfigError("cnn: sequence length must be positive");
  if (maxWords < 1) throw ConfigError("cnn: max_words must be positive");
  if (embeddingDim < 1) throw ConfigError("cnn: embedding dim must be positive");
  if (filters < 1 || kernelWidth < 1 || denseUnits < 1) {
    throw ConfigError("cnn: filters, kernel width and dense units must be positive");
  }
  for (int p : pools) {
    if (p < 1) throw ConfigError("cnn: pool widths must be positive");
  }
  if (batchSize < 1) throw ConfigError("cnn: batch size must be positive");
  if (!(learningRate > 0) || !(rho >= 0 && rho < 1) || !(epsilon > 0)) {
    throw ConfigError("cnn: need lr > 0, 0 <= rho < 1, epsilon > 0");
  }
  if (epochs < 0) throw ConfigError("cnn: epochs must be non-negative");
  shapeChain(*this);
}

nlohmann::json CnnHyper::toJson() const {
  return {{"sequence_length", sequenceLength},
          {"max_words", maxWords},
          {"embedding_dim", embeddingDim},
          {"filters", filters},
          {"kernel_width", kernelWidth},
          {"pools", pools},
          {"dense_units", denseUnits},
          {"batch_size", batchSize},
          {"lr", learningRate},
          {"rho", rho},
          {"epsilon", epsilon},
          {"epochs", epochs},
          {"freeze_embeddings", freezeEmbeddings}};
}

CnnHyper CnnHyper::fromJson(const nlohmann::json& j) {
  CnnHyper h;
  h.sequenceLength = j.at("sequence_length").get<std::size_t>();
  h.maxWords = j.at("max_words").get<std::size_t>();
  h.embeddingDim = j.at("embedding_dim").get<int>();
  h.filters = j.at("filters").get<int>();
  h.kernelWidth = j.at("kernel_width").get<int>();
  h.pools = j.at("pools").get<std::array<int, 3>>();
  h.denseUnits = j.at("dense_units").get<int>();
  h.batchSize = j.at("batch_size").get<std::size_t>();
  h.learningRate = j.at("lr").get<double>();
  h.rho = j.at("rho").get<double>();
  h.epsilon = j.at("epsilon").get<double>();
  h.epochs = j.at("epochs").get<int>();
  h.freezeEmbeddings = j.at("freeze_embeddings").get<bool>();
  return h;
}

std::vector<std::size_t> shapeChain(const CnnHyper& hyper) {
  std::vector<std::size_t> chain{hyper.sequenceLength};
  std::size_t n = hyper.sequenceLength;
  const auto width = static_cast<std::size_t>(std::max(1, hyper.kernelWidth));
  for (int stage = 0; stage < 3; ++stage) {
    if (n < width) {
      throw ConfigError("cnn: sequence length " + std::to_string(hyper.sequenceLength) +
                        " is too short for the layer stack (convolution " +
                        std::to_string(stage + 1) + " has no output position)");
    }
    n = n - width + 1;
    chain.push_back(n);
    const auto pool = static_cast<std::size_t>(std::max(1, hyper.pools[stage]));
    if (n < pool) {
      throw ConfigError("cnn: sequence length " + std::to_string(hyper.sequenceLength) +
                        " is too short for the layer stack (pool " +
                        std::to_string(stage + 1) + " has no output position)");
    }
    n /= pool;
    chain.push_back(n);
  }
  return chain;
}

const char* CnnNetwork::paramName(std::size_t p) {
  static const char* names[kParamCount] = {
      "embedding", "conv1.w", "conv1.b", "conv2.w", "conv2.b", "conv3.w",
      "conv3.b",   "dense.w", "dense.b", "output.w", "output.b"};
  return p < kParamCount ? names[p] : "?";
}

CnnNetwork::CnnNetwork(const CnnHyper& hyper, std::size_t vocabRows, int embeddingDim,
                       bool trainEmbedding)
    : hyper_(hyper), trainEmbedding_(trainEmbedding) {
  hyper_.embeddingDim = embeddingDim;
  hyper_.validate();
  const auto chain = shapeChain(hyper_);
  const Index w = hyper_.kernelWidth;
  const Index f = hyper_.filters;
  const Index d = embeddingDim;
  params_.resize(kParamCount);
  params_[kEmbedding] = MatrixXd::Zero(static_cast<Index>(vocabRows), d);
  params_[kConv1W] = MatrixXd::Zero(w * d, f);
  params_[kConv1B] = MatrixXd::Zero(1, f);
  params_[kConv2W] = MatrixXd::Zero(w * f, f);
  params_[kConv2B] = MatrixXd::Zero(1, f);
  params_[kConv3W] = MatrixXd::Zero(w * f, f);
  params_[kConv3B] = MatrixXd::Zero(1, f);
  params_[kDenseW] = MatrixXd::Zero(static_cast<Index>(chain.back()) * f, hyper_.denseUnits);
  params_[kDenseB] = MatrixXd::Zero(1, hyper_.denseUnits);
  params_[kOutputW] = MatrixXd::Zero(hyper_.denseUnits, 2);
  params_[kOutputB] = MatrixXd::Zero(1, 2);
}

void CnnNetwork::initialize(Rng& rng) {
  auto glorot = [&](MatrixXd& m, double fanIn, double fanOut) {
    const double limit = std::sqrt(6.0 / (fanIn + fanOut));
    for (Index i = 0; i < m.size(); ++i) {
      m.data()[i] = rng.uniform(-limit, limit);
    }
  };
  const double w = hyper_.kernelWidth;
  const double f = hyper_.filters;
  const double d = static_cast<double>(params_[kEmbedding].cols());
  if (trainEmbedding_) {
    auto& e = params_[kEmbedding];
    for (Index i = 0; i < e.size(); ++i) {
      e.data()[i] = rng.uniform(-0.05, 0.05);
    }
    e.row(0).setZero();
  }
  glorot(params_[kConv1W], w * d, w * f);
  glorot(params_[kConv2W], w * f, w * f);
  glorot(params_[kConv3W], w * f, w * f);
  glorot(params_[kDenseW], static_cast<double>(params_[kDenseW].rows()),
         static_cast<double>(params_[kDenseW].cols()));
  glorot(params_[kOutputW], static_cast<double>(params_[kOutputW].rows()), 2.0);
  for (auto p : {kConv1B, kConv2B, kConv3B, kDenseB, kOutputB}) {
    params_[p].setZero();
  }
}

// Activations of one sequence, kept for the backward pass.
struct CnnNetwork::Trace {
  std::array<MatrixXd, 3> inputs;     // block input, positions x channels
  std::array<MatrixXd, 3> columns;    // im2col of the block input
  std::array<MatrixXd, 3> pre;        // convolution output before ReLU
  std::array<std::vector<Index>, 3> argmax;  // winning row per pooled cell
  MatrixXd pooled;                    // last pool output
  RowVectorXd flat;
  RowVectorXd dense;                  // after ReLU
  RowVectorXd probs;
};

void CnnNetwork::forwardOne(const Sequence& sequence, Trace& trace) const {
  const Index w = hyper_.kernelWidth;
  const auto& emb = params_[kEmbedding];
  MatrixXd x(static_cast<Index>(sequence.size()), emb.cols());
  for (std::size_t t = 0; t < sequence.size(); ++t) {
    x.row(static_cast<Index>(t)) = emb.row(sequence[t]);
  }
  for (int s = 0; s < 3; ++s) {
    const Index channels = x.cols();
    const Index outLen = x.rows() - w + 1;
    MatrixXd cols(outLen, w * channels);
    for (Index j = 0; j < w; ++j) {
      cols.block(0, j * channels, outLen, channels) = x.block(j, 0, outLen, channels);
    }
    const auto& weight = params_[kConv1W + 2 * static_cast<std::size_t>(s)];
    const auto& bias = params_[kConv1B + 2 * static_cast<std::size_t>(s)];
    MatrixXd z = cols * weight;
    z.rowwise() += bias.row(0);
    const Index pool = hyper_.pools[static_cast<std::size_t>(s)];
    const Index pooledLen = outLen / pool;
    MatrixXd pooled(pooledLen, z.cols());
    auto& arg = trace.argmax[static_cast<std::size_t>(s)];
    arg.assign(static_cast<std::size_t>(pooledLen * z.cols()), 0);
    for (Index c = 0; c < z.cols(); ++c) {
      for (Index p = 0; p < pooledLen; ++p) {
        Index best = p * pool;
        double value = std::max(0.0, z(best, c));
        for (Index r = best + 1; r < (p + 1) * pool; ++r) {
          const double v = std::max(0.0, z(r, c));
          if (v > value) {
            value = v;
            best = r;
          }
        }
        pooled(p, c) = value;
        arg[static_cast<std::size_t>(p * z.cols() + c)] = best;
      }
    }
    trace.inputs[static_cast<std::size_t>(s)] = std::move(x);
    trace.columns[static_cast<std::size_t>(s)] = std::move(cols);
    trace.pre[static_cast<std::size_t>(s)] = std::move(z);
    x = std::move(pooled);
  }
  trace.pooled = std::move(x);
  // Flatten position-major: index t * filters + c.
  trace.flat.resize(trace.pooled.size());
  for (Index t = 0; t < trace.pooled.rows(); ++t) {
    trace.flat.segment(t * trace.pooled.cols(), trace.pooled.cols()) = trace.pooled.row(t);
  }
  trace.dense = (trace.flat * params_[kDenseW] + params_[kDenseB]).cwiseMax(0.0);
  RowVectorXd logits = trace.dense * params_[kOutputW] + params_[kOutputB];
  logits.array() -= logits.maxCoeff();
  trace.probs = logits.array().exp();
  trace.probs /= trace.probs.sum();
}

double CnnNetwork::backwardOne(const Sequence& sequence, int label, double scale,
                               Trace& trace, std::vector<MatrixXd>& grads) const {
  const double loss = -std::log(std::max(trace.probs[label], 1e-300));
  RowVectorXd dLogits = trace.probs;
  dLogits[label] -= 1.0;
  dLogits *= scale;
  grads[kOutputW].noalias() += trace.dense.transpose() * dLogits;
  grads[kOutputB] += dLogits;
  RowVectorXd dDense = dLogits * params_[kOutputW].transpose();
  for (Index i = 0; i < dDense.size(); ++i) {
    if (trace.dense[i] <= 0) dDense[i] = 0;
  }
  grads[kDenseW].noalias() += trace.flat.transpose() * dDense;
  grads[kDenseB] += dDense;
  const RowVectorXd dFlat = dDense * params_[kDenseW].transpose();
  MatrixXd dPooled(trace.pooled.rows(), trace.pooled.cols());
  for (Index t = 0; t < dPooled.rows(); ++t) {
    dPooled.row(t) = dFlat.segment(t * dPooled.cols(), dPooled.cols());
  }

  const Index w = hyper_.kernelWidth;
  for (int s = 2; s >= 0; --s) {
    const auto su = static_cast<std::size_t>(s);
    const auto& z = trace.pre[su];
    const auto& arg = trace.argmax[su];
    MatrixXd dz = MatrixXd::Zero(z.rows(), z.cols());
    for (Index c = 0; c < z.cols(); ++c) {
      for (Index p = 0; p < dPooled.rows(); ++p) {
        const Index r = arg[static_cast<std::size_t>(p * z.cols() + c)];
        if (z(r, c) > 0) {
          dz(r, c) += dPooled(p, c);
        }
      }
    }
    grads[kConv1W + 2 * su].noalias() += trace.columns[su].transpose() * dz;
    grads[kConv1B + 2 * su] += dz.colwise().sum();
    if (s == 0 && !trainEmbedding_) {
      break;
    }
    const MatrixXd dCols = dz * params_[kConv1W + 2 * su].transpose();
    const Index channels = trace.inputs[su].cols();
    MatrixXd dx = MatrixXd::Zero(trace.inputs[su].rows(), channels);
    for (Index j = 0; j < w; ++j) {
      dx.block(j, 0, z.rows(), channels) += dCols.block(0, j * channels, z.rows(), channels);
    }
    if (s == 0) {
      for (std::size_t t = 0; t < sequence.size(); ++t) {
        if (sequence[t] != WordIndexer::kPadding) {
          grads[kEmbedding].row(sequence[t]) += dx.row(static_cast<Index>(t));
        }
      }
    } else {
      dPooled = std::move(dx);
    }
  }
  return loss;
}

Eigen::MatrixXd CnnNetwork::forward(std::span<const Sequence> batch) const {
  MatrixXd out(static_cast<Index>(batch.size()), 2);
  Trace trace;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    if (batch[i].size() != hyper_.sequenceLength) {
      throw std::invalid_argument("cnn: sequence length mismatch");
    }
    forwardOne(batch[i], trace);
    out.row(static_cast<Index>(i)) = trace.probs;
  }
  return out;
}

double CnnNetwork::lossAndGradient(std::span<const Sequence> batch, std::span<const int> labels,
                                   std::vector<MatrixXd>* grads) const {
  if (batch.empty() || batch.size() != labels.size()) {
    throw std::invalid_argument("cnn: batch and labels must be non-empty and aligned");
  }
  const double scale = 1.0 / static_cast<double>(batch.size());
  const unsigned threads = std::max(1u, std::min<unsigned>(hyper_.threads,
                                                           static_cast<unsigned>(batch.size())));
  // Each worker owns a contiguous slice and its own gradient buffer; buffers
  // are summed in worker order so results depend only on the thread count.
  std::vector<std::vector<MatrixXd>> partial(threads);
  std::vector<double> losses(threads, 0.0);
  auto work = [&](unsigned t, std::size_t first, std::size_t last) {
    Trace trace;
    if (grads) partial[t] = zerosLike(params_);
    for (std::size_t i = first; i < last; ++i) {
      if (batch[i].size() != hyper_.sequenceLength) {
        throw std::invalid_argument("cnn: sequence length mismatch");
      }
      forwardOne(batch[i], trace);
      if (grads) {
        losses[t] += backwardOne(batch[i], labels[i], scale, trace, partial[t]);
      } else {
        losses[t] += -std::log(std::max(trace.probs[labels[i]], 1e-300));
      }
    }
  };
  const std::size_t chunk = (batch.size() + threads - 1) / threads;
  if (threads == 1) {
    work(0, 0, batch.size());
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      const auto first = std::min(batch.size(), t * chunk);
      pool.emplace_back(work, t, first, std::min(batch.size(), first + chunk));
    }
    for (auto& th : pool) th.join();
  }
  double loss = 0.0;
  for (double l : losses) loss += l;
  if (grads) {
    *grads = std::move(partial[0]);
    for (unsigned t = 1; t < threads; ++t) {
      for (std::size_t p = 0; p < grads->size(); ++p) {
        (*grads)[p] += partial[t][p];
      }
    }
  }
  return loss * scale;
}

RmsProp::RmsProp(const CnnNetwork& network, double learningRate, double rho, double epsilon)
    : learningRate_(learningRate),
      rho_(rho),
      epsilon_(epsilon),
      accumulators_(zerosLike(network.params())) {}

void RmsProp::apply(CnnNetwork& network, const std::vector<MatrixXd>& grads) {
  auto& params = network.params();
  for (std::size_t p = 0; p < params.size(); ++p) {
    if (p == CnnNetwork::kEmbedding && !network.trainsEmbedding()) {
      continue;
    }
    auto& acc = accumulators_[p];
    acc = rho_ * acc + (1.0 - rho_) * grads[p].cwiseProduct(grads[p]);
    params[p].array() -= learningRate_ * grads[p].array() / (acc.array().sqrt() + epsilon_);
  }
  if (network.trainsEmbedding()) {
    params[CnnNetwork::kEmbedding].row(0).setZero();
  }
}

CnnModel::CnnModel(WordIndexer words, CnnNetwork network)
    : words_(std::move(words)), network_(std::move(network)) {}

Prediction CnnModel::predict(std::string_view text) const {
  const auto length = network_.hyper().sequenceLength;
  const std::vector<Sequence> batch{words_.encode(text, length)};
  const auto probs = network_.forward(batch);
  Prediction p;
  p.scores = {probs(0, 0), probs(0, 1)};
  p.label = p.scores[1] >= p.scores[0] ? Label::Eligible : Label::NotEligible;
  p.lowConfidence = words_.knownTokens(text, length) == 0;
  return p;
}

void CnnModel::store(ModelFile& file) const {
  file.header["hyper"] = network_.hyper().toJson();
  file.header["words"] = words_.words();
  file.header["train_embedding"] = network_.trainsEmbedding();
  const auto& params = network_.params();
  for (std::size_t p = 0; p < params.size(); ++p) {
    const auto& m = params[p];
    // Stored row-major.
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm = m;
    file.blobs[CnnNetwork::paramName(p)] =
        Blob{{static_cast<std::uint64_t>(m.rows()), static_cast<std::uint64_t>(m.cols())},
             std::vector<double>(rm.data(), rm.data() + rm.size())};
  }
}

std::unique_ptr<CnnModel> CnnModel::restore(const ModelFile& file) {
  auto words = WordIndexer::fromWords(file.header.at("words").get<std::vector<std::string>>());
  const auto hyper = CnnHyper::fromJson(file.header.at("hyper"));
  const auto& emb = file.blob("embedding");
  if (emb.shape.size() != 2 || emb.shape[0] != words.rows()) {
    throw DataError("cnn model file: embedding table does not match the word list");
  }
  CnnNetwork network(hyper, words.rows(), static_cast<int>(emb.shape[1]),
                     file.header.at("train_embedding").get<bool>());
  auto& params = network.params();
  for (std::size_t p = 0; p < params.size(); ++p) {
    const auto& blob = file.blob(CnnNetwork::paramName(p));
    if (blob.shape.size() != 2 || static_cast<Index>(blob.shape[0]) != params[p].rows() ||
        static_cast<Index>(blob.shape[1]) != params[p].cols()) {
      throw DataError(std::string("cnn model file: bad shape for ") + CnnNetwork::paramName(p));
    }
    params[p] = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                               Eigen::RowMajor>>(
        blob.doubles().data(), params[p].rows(), params[p].cols());
  }
  return std::make_unique<CnnModel>(std::move(words), std::move(network));
}

std::unique_ptr<CnnModel> trainCnn(const Dataset& dataset,
                                   const embed::EmbeddingModel* pretrained,
                                   const CnnHyper& hyper, std::uint64_t seed,
                                   CnnTrainStats* stats) {
  hyper.validate();
  if (dataset.empty()) {
    throw DataError("cannot train the CNN on an empty dataset");
  }
  std::vector<std::string> texts;
  texts.reserve(dataset.size());
  for (const auto& s : dataset) {
    texts.push_back(s.text);
  }
  auto words = WordIndexer::build(texts, hyper.maxWords);
  const bool trainEmbedding = !(pretrained && hyper.freezeEmbeddings);
  const int dim = pretrained ? pretrained->dim() : hyper.embeddingDim;
  CnnNetwork network(hyper, words.rows(), dim, trainEmbedding);
  Rng initRng(deriveSeed(seed, "cnn-init"));
  network.initialize(initRng);
  if (pretrained) {
    // Words without a pretrained vector keep a zero row.
    auto& e = network.params()[CnnNetwork::kEmbedding];
    e.setZero();
    for (std::size_t i = 0; i < words.words().size(); ++i) {
      const auto v = pretrained->vector(words.words()[i]);
      if (!v.oov) {
        for (int d = 0; d < dim; ++d) {
          e(static_cast<Index>(i + 1), d) = v.values[static_cast<std::size_t>(d)];
        }
      }
    }
  }

  std::vector<Sequence> sequences;
  std::vector<int> labels;
  sequences.reserve(dataset.size());
  for (const auto& s : dataset) {
    sequences.push_back(words.encode(s.text, hyper.sequenceLength));
    labels.push_back(static_cast<int>(s.label));
  }
  RmsProp optimizer(network, hyper.learningRate, hyper.rho, hyper.epsilon);
  Rng orderRng(deriveSeed(seed, "cnn-order"));
  std::vector<std::size_t> order(sequences.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<MatrixXd> grads;
  for (int epoch = 0; epoch < hyper.epochs; ++epoch) {
    orderRng.shuffle(order);
    double lossSum = 0.0;
    std::size_t batches = 0;
    for (std::size_t start = 0; start < order.size(); start += hyper.batchSize) {
      const auto end = std::min(order.size(), start + hyper.batchSize);
      std::vector<Sequence> batch;
      std::vector<int> batchLabels;
      for (std::size_t i = start; i < end; ++i) {
        batch.push_back(sequences[order[i]]);
        batchLabels.push_back(labels[order[i]]);
      }
      lossSum += network.lossAndGradient(batch, batchLabels, &grads);
      optimizer.apply(network, grads);
      ++batches;
    }
    if (stats) {
      stats->epochLoss.push_back(lossSum / static_cast<double>(batches));
    }
  }
  return std::make_unique<CnnModel>(std::move(words), std::move(network));
}

}  // namespace ctelig::classify
