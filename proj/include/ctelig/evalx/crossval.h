#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "ctelig/evalx/metrics.h"
#include "ctelig/textprep/dataset.h"

namespace ctelig::evalx {

using textprep::Dataset;

// A trained model, reduced to batch prediction.
using Predictor = std::function<std::vector<Label>(const Dataset&)>;
// Trains on a dataset with the given seed.
using Trainer = std::function<Predictor(const Dataset& train, std::uint64_t seed)>;

struct Summary {
  double mean = 0.0;
  double stddev = 0.0;  // population standard deviation
};

Summary summarize(std::span<const double> values);

struct FoldScore {
  std::size_t size = 0;  // validation statements
  ConfusionMatrix validation;
  Metrics metrics;
  Kappa kappa;
  double trainF1 = 0.0;  // on the fold's own training part, when requested
};

struct EvaluationReport {
  ConfusionMatrix confusion;  // summed over folds
  Metrics metrics;
  Kappa kappa;
  std::vector<FoldScore> folds;
  Summary f1;
  Summary accuracy;
  Summary kappaSummary;
  Summary trainF1;
};

// Builds a report from per-fold results (a single fold for a holdout).
EvaluationReport makeReport(std::vector<FoldScore> folds);

// Stratified folds: each class is shuffled and dealt round-robin, continuing
// across classes, so fold sizes and per-class counts differ by at most one.
// Returns validation indices per fold, ascending. Throws DataError when the
// dataset has fewer than k statements, std::invalid_argument when k < 2.
std::vector<std::vector<std::size_t>> stratifiedFolds(const Dataset& dataset,
                                                      std::size_t k,
                                                      std::uint64_t seed);

Dataset subset(const Dataset& dataset, std::span<const std::size_t> indices);

struct CvOptions {
  std::size_t k = 5;
  bool trainScores = false;
};

EvaluationReport kfoldCv(const Dataset& dataset, const Trainer& trainer,
                         std::uint64_t seed, const CvOptions& options = {});

// Train on one set and score another.
EvaluationReport holdout(const Dataset& train, const Dataset& test,
                         const Trainer& trainer, std::uint64_t seed,
                         bool trainScores = false);

// Balanced subsample of the given size; subsamples drawn with the same seed
// are nested (a smaller one is a prefix of a larger one, per class). Throws
// DataError when a class cannot supply its share.
Dataset balancedSubsample(const Dataset& dataset, std::size_t size,
                          std::uint64_t seed);

struct CurvePoint {
  std::size_t size = 0;       // balanced subsample size
  std::size_t trainSize = 0;  // the 80% part cross-validated
  Summary trainF1;
  Summary validationF1;
  // F1 on the held-out 20% of a model trained on the whole 80%.
  double testF1 = 0.0;
};

struct CurveOptions {
  std::size_t k = 5;
  double testFraction = textprep::kDefaultTestFraction;
  bool heldOutTest = true;
};

std::vector<CurvePoint> learningCurve(const Dataset& dataset,
                                      std::span<const std::size_t> sizes,
                                      const Trainer& trainer,
                                      std::uint64_t seed,
                                      const CurveOptions& options = {});

}  // namespace ctelig::evalx
