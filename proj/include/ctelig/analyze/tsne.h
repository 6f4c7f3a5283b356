#pragma once

#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ctelig/analyze/points.h"

namespace ctelig::analyze {

struct TsneOptions {
  double perplexity = 30.0;
  int iterations = 1000;
  double learningRate = 200.0;
  double exaggeration = 12.0;
  int exaggerationIterations = 250;
  double initialMomentum = 0.5;
  double finalMomentum = 0.8;
  int momentumSwitch = 250;
  double minGain = 0.01;
  // Entropy tolerance (nats) of the bandwidth search.
  double entropyTolerance = 1e-4;
  int klEvery = 50;
  // Exact t-SNE is quadratic; larger inputs are refused.
  std::size_t maxPoints = 2000;
  unsigned threads = 1;

  // Throws ConfigError.
  void validate() const;
};

struct Affinities {
  Points joint;                    // symmetric, sums to 1, zero diagonal
  std::vector<double> entropies;   // of each conditional row, in nats
  std::vector<double> precisions;  // beta = 1 / (2 sigma^2) per point
};

// Per-point Gaussian bandwidths by bisection on the conditional entropy,
// then P = (P_j|i + P_i|j) / 2N.
Affinities affinities(const Points& x, double perplexity, double tolerance);

struct ProjectedPoints {
  Points coordinates;  // N x 2
  double kl = 0.0;
  // (iteration, KL) every klEvery iterations and at the end.
  std::vector<std::pair<int, double>> klHistory;
};

// Throws BudgetError above maxPoints and DataError when the perplexity is
// not in (1, N - 1).
ProjectedPoints tsne(const Points& x, const TsneOptions& options,
                     std::uint64_t seed);

// "word<TAB>x<TAB>y"
void writeTsneTsv(std::ostream& out, std::span<const std::string> words,
                  const ProjectedPoints& projection);

}  // namespace ctelig::analyze
