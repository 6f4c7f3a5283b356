#include "ctelig/evalx/crossval.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "ctelig/common/errors.h"
#include "ctelig/common/random.h"

namespace ctelig::evalx {

namespace {

std::array<std::vector<std::size_t>, 2> indicesByClass(const Dataset& d) {
  std::array<std::vector<std::size_t>, 2> out;
  for (std::size_t i = 0; i < d.size(); ++i) {
    out[static_cast<int>(d[i].label)].push_back(i);
  }
  return out;
}

std::vector<Label> labelsOf(const Dataset& d) {
  std::vector<Label> out;
  out.reserve(d.size());
  for (const auto& s : d) {
    out.push_back(s.label);
  }
  return out;
}

ConfusionMatrix score(const Predictor& predictor, const Dataset& d) {
  auto predicted = predictor(d);
  auto truth = labelsOf(d);
  return confusion(predicted, truth);
}

FoldScore evaluate(const Dataset& train, const Dataset& test,
                   const Trainer& trainer, std::uint64_t seed,
                   bool trainScores) {
  Predictor predictor = trainer(train, seed);
  FoldScore fold;
  fold.size = test.size();
  fold.validation = score(predictor, test);
  fold.metrics = metrics(fold.validation);
  fold.kappa = cohensKappa(fold.validation);
  if (trainScores) {
    fold.trainF1 = metrics(score(predictor, train)).f1;
  }
  return fold;
}

}  // namespace

Summary summarize(std::span<const double> values) {
  Summary s;
  if (values.empty()) {
    return s;
  }
  double sum = 0.0;
  for (double v : values) {
    sum += v;
  }
  s.mean = sum / static_cast<double>(values.size());
  double sq = 0.0;
  for (double v : values) {
    sq += (v - s.mean) * (v - s.mean);
  }
  s.stddev = std::sqrt(sq / static_cast<double>(values.size()));
  return s;
}

EvaluationReport makeReport(std::vector<FoldScore> folds) {
  EvaluationReport r;
  std::vector<double> f1, acc, kappa, trainF1;
  for (const auto& f : folds) {
    r.confusion += f.validation;
    f1.push_back(f.metrics.f1);
    acc.push_back(f.metrics.accuracy);
    kappa.push_back(f.kappa.value);
    trainF1.push_back(f.trainF1);
  }
  r.metrics = metrics(r.confusion);
  if (r.confusion.total() > 0) {
    r.kappa = cohensKappa(r.confusion);
  }
  r.f1 = summarize(f1);
  r.accuracy = summarize(acc);
  r.kappaSummary = summarize(kappa);
  r.trainF1 = summarize(trainF1);
  r.folds = std::move(folds);
  return r;
}

std::vector<std::vector<std::size_t>> stratifiedFolds(const Dataset& dataset,
                                                      std::size_t k,
                                                      std::uint64_t seed) {
  if (k < 2) {
    throw std::invalid_argument("k-fold needs k >= 2, got " +
                                std::to_string(k));
  }
  if (dataset.size() < k) {
    throw DataError("cannot split " + std::to_string(dataset.size()) +
                    " statements into " + std::to_string(k) + " folds");
  }
  auto byClass = indicesByClass(dataset);
  Rng rng(seed);
  std::vector<std::vector<std::size_t>> folds(k);
  std::size_t next = 0;
  for (auto& indices : byClass) {
    rng.shuffle(indices);
    for (auto i : indices) {
      folds[next].push_back(i);
      next = (next + 1) % k;
    }
  }
  for (auto& f : folds) {
    std::sort(f.begin(), f.end());
  }
  return folds;
}

Dataset subset(const Dataset& dataset, std::span<const std::size_t> indices) {
  std::vector<textprep::LabeledStatement> out;
  out.reserve(indices.size());
  for (auto i : indices) {
    out.push_back(dataset[i]);
  }
  return Dataset(std::move(out));
}

EvaluationReport kfoldCv(const Dataset& dataset, const Trainer& trainer,
                         std::uint64_t seed, const CvOptions& options) {
  auto folds = stratifiedFolds(dataset, options.k, deriveSeed(seed, "folds"));
  std::vector<FoldScore> scores;
  for (std::size_t f = 0; f < folds.size(); ++f) {
    std::vector<char> inValidation(dataset.size(), 0);
    for (auto i : folds[f]) {
      inValidation[i] = 1;
    }
    std::vector<std::size_t> trainIdx;
    for (std::size_t i = 0; i < dataset.size(); ++i) {
      if (!inValidation[i]) {
        trainIdx.push_back(i);
      }
    }
    scores.push_back(evaluate(subset(dataset, trainIdx),
                              subset(dataset, folds[f]), trainer,
                              deriveSeed(seed, "fold-" + std::to_string(f)),
                              options.trainScores));
  }
  return makeReport(std::move(scores));
}

EvaluationReport holdout(const Dataset& train, const Dataset& test,
                         const Trainer& trainer, std::uint64_t seed,
                         bool trainScores) {
  std::vector<FoldScore> scores;
  scores.push_back(evaluate(train, test, trainer, seed, trainScores));
  return makeReport(std::move(scores));
}

Dataset balancedSubsample(const Dataset& dataset, std::size_t size,
                          std::uint64_t seed) {
  auto byClass = indicesByClass(dataset);
  // The odd statement, if any, goes to the eligible class.
  const std::array<std::size_t, 2> want{size / 2, size - size / 2};
  Rng rng(seed);
  std::vector<std::size_t> keep;
  for (int c = 0; c < 2; ++c) {
    auto& indices = byClass[c];
    if (indices.size() < want[c]) {
      throw DataError("balanced subsample of " + std::to_string(size) +
                      " needs " + std::to_string(want[c]) + " " +
                      toString(static_cast<Label>(c)) + " statements, have " +
                      std::to_string(indices.size()));
    }
    // The shuffle depends only on the seed and the class size, so any two
    // sizes see the same order and the smaller subset is a prefix.
    rng.shuffle(indices);
    keep.insert(keep.end(), indices.begin(), indices.begin() + want[c]);
  }
  std::sort(keep.begin(), keep.end());
  return subset(dataset, keep);
}

std::vector<CurvePoint> learningCurve(const Dataset& dataset,
                                      std::span<const std::size_t> sizes,
                                      const Trainer& trainer,
                                      std::uint64_t seed,
                                      const CurveOptions& options) {
  std::vector<CurvePoint> curve;
  for (auto size : sizes) {
    Dataset sample = balancedSubsample(dataset, size, deriveSeed(seed, "subsample"));
    auto [train, test] = textprep::splitTrainTest(
        sample, options.testFraction,
        deriveSeed(seed, "curve-split-" + std::to_string(size)));
    CvOptions cv;
    cv.k = options.k;
    cv.trainScores = true;
    auto report =
        kfoldCv(train, trainer, deriveSeed(seed, "curve-" + std::to_string(size)), cv);
    CurvePoint p;
    p.size = size;
    p.trainSize = train.size();
    p.trainF1 = report.trainF1;
    p.validationF1 = report.f1;
    if (options.heldOutTest && !test.empty()) {
      auto h = holdout(train, test, trainer,
                       deriveSeed(seed, "curve-test-" + std::to_string(size)));
      p.testF1 = h.metrics.f1;
    }
    curve.push_back(p);
  }
  return curve;
}

}  // namespace ctelig::evalx
