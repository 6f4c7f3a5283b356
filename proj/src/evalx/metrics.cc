#include "ctelig/evalx/metrics.h"

#include <stdexcept>
#include <string>

#include "ctelig/common/errors.h"

namespace ctelig::evalx {

void ConfusionMatrix::add(Label predicted, Label truth) {
  const bool p = predicted == Label::Eligible;
  const bool t = truth == Label::Eligible;
  if (p && t) {
    ++tp;
  } else if (p) {
    ++fp;
  } else if (t) {
    ++fn;
  } else {
    ++tn;
  }
}

ConfusionMatrix& ConfusionMatrix::operator+=(const ConfusionMatrix& other) {
  tp += other.tp;
  fp += other.fp;
  fn += other.fn;
  tn += other.tn;
  return *this;
}

ConfusionMatrix confusion(std::span<const Label> predictions,
                          std::span<const Label> labels) {
  if (predictions.size() != labels.size()) {
    throw std::invalid_argument(
        "confusion: " + std::to_string(predictions.size()) +
        " predictions for " + std::to_string(labels.size()) + " labels");
  }
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    cm.add(predictions[i], labels[i]);
  }
  return cm;
}

namespace {

double ratio(double num, double den, bool& undefined) {
  if (den == 0.0) {
    undefined = true;
    return 0.0;
  }
  return num / den;
}

}  // namespace

Metrics metrics(const ConfusionMatrix& cm) {
  Metrics m;
  const double tp = static_cast<double>(cm.tp);
  const double fp = static_cast<double>(cm.fp);
  const double fn = static_cast<double>(cm.fn);
  const double tn = static_cast<double>(cm.tn);
  m.precision = ratio(tp, tp + fp, m.precisionUndefined);
  m.recall = ratio(tp, tp + fn, m.recallUndefined);
  // 2tp / (2tp + fp + fn) equals the harmonic mean wherever both exist and
  // stays defined when only one of precision or recall is.
  m.f1 = ratio(2.0 * tp, 2.0 * tp + fp + fn, m.f1Undefined);
  m.accuracy = ratio(tp + tn, tp + fp + fn + tn, m.accuracyUndefined);
  return m;
}

Kappa cohensKappa(const ConfusionMatrix& cm) {
  if (cm.total() == 0) {
    throw DataError("Cohen's kappa of an empty confusion matrix");
  }
  const double n = static_cast<double>(cm.total());
  const double tp = static_cast<double>(cm.tp);
  const double fp = static_cast<double>(cm.fp);
  const double fn = static_cast<double>(cm.fn);
  const double tn = static_cast<double>(cm.tn);
  const double po = (tp + tn) / n;
  const double predPos = (tp + fp) / n;
  const double truePos = (tp + fn) / n;
  const double pe = predPos * truePos + (1.0 - predPos) * (1.0 - truePos);
  Kappa k;
  if (pe >= 1.0) {
    k.degenerate = true;
    k.value = po >= 1.0 ? 1.0 : 0.0;
    return k;
  }
  k.value = (po - pe) / (1.0 - pe);
  return k;
}

}  // namespace ctelig::evalx
