#pragma once

#include <cstdint>
#include <span>

#include "ctelig/textprep/dataset.h"

namespace ctelig::evalx {

using textprep::Label;

// Eligible is the positive class.
struct ConfusionMatrix {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;
  std::uint64_t tn = 0;

  std::uint64_t total() const { return tp + fp + fn + tn; }
  void add(Label predicted, Label truth);
  ConfusionMatrix& operator+=(const ConfusionMatrix& other);
  bool operator==(const ConfusionMatrix&) const = default;
};

// Throws std::invalid_argument on a length mismatch.
ConfusionMatrix confusion(std::span<const Label> predictions,
                          std::span<const Label> labels);

// A zero denominator yields 0 and sets the matching flag.
struct Metrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double accuracy = 0.0;
  bool precisionUndefined = false;
  bool recallUndefined = false;
  bool f1Undefined = false;
  bool accuracyUndefined = false;
};

Metrics metrics(const ConfusionMatrix& cm);

struct Kappa {
  double value = 0.0;
  // Chance agreement was 1, so the ratio was replaced by 1 or 0.
  bool degenerate = false;
};

// (p_o - p_e) / (1 - p_e). Throws DataError for an empty matrix.
Kappa cohensKappa(const ConfusionMatrix& cm);

}  // namespace ctelig::evalx
