#pragma once

#include <cmath>
#include <cstddef>
#include <span>

namespace ctelig::embed {

// -log(sigmoid(x)) without overflow.
template <typename Real>
Real logisticLoss(Real x) {
  return x > 0 ? std::log1p(std::exp(-x)) : -x + std::log1p(std::exp(x));
}

template <typename Real>
Real sigmoid(Real x) {
  if (x >= 0) {
    return Real(1) / (Real(1) + std::exp(-x));
  }
  const Real e = std::exp(x);
  return e / (Real(1) + e);
}

// One negative-sampling step for a hidden vector h against output rows
// targets[0] (the true context, label 1) and targets[1..] (negatives,
// label 0). Loss is sum_k -log sigmoid(s_k * h.u_k), s_k = +1/-1.
//
// Applies u_k += lr * (y_k - sigmoid(h.u_k)) * h to every target and
// accumulates hiddenGrad += lr * (y_k - sigmoid(h.u_k)) * u_k (with u_k
// taken before its update), i.e. both are -lr times the loss gradient.
// Returns the loss before the update.
template <typename Real>
Real negativeSamplingStep(std::span<const Real> hidden,
                          std::span<const std::span<Real>> targets,
                          Real learningRate, std::span<Real> hiddenGrad) {
  Real loss = 0;
  const std::size_t d = hidden.size();
  for (std::size_t k = 0; k < targets.size(); ++k) {
    auto u = targets[k];
    Real score = 0;
    for (std::size_t i = 0; i < d; ++i) {
      score += hidden[i] * u[i];
    }
    const Real label = k == 0 ? Real(1) : Real(0);
    loss += logisticLoss(k == 0 ? score : -score);
    const Real g = learningRate * (label - sigmoid(score));
    for (std::size_t i = 0; i < d; ++i) {
      hiddenGrad[i] += g * u[i];
      u[i] += g * hidden[i];
    }
  }
  return loss;
}

}  // namespace ctelig::embed
