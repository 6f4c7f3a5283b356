#include "ctelig/analyze/tsne.h"

#include <cmath>
#include <iomanip>
#include <limits>

#include "ctelig/common/errors.h"
#include "ctelig/common/parallel.h"
#include "ctelig/common/random.h"

namespace ctelig::analyze {

void TsneOptions::validate() const {
  if (iterations < 1) throw ConfigError("tsne iterations must be >= 1");
  if (!(learningRate > 0.0)) throw ConfigError("tsne learning rate must be > 0");
  if (!(exaggeration >= 1.0)) throw ConfigError("tsne exaggeration must be >= 1");
  if (exaggerationIterations < 0 || momentumSwitch < 0) {
    throw ConfigError("tsne schedule iterations must be >= 0");
  }
  if (!(entropyTolerance > 0.0)) throw ConfigError("tsne entropy tolerance must be > 0");
  if (klEvery < 1) throw ConfigError("tsne kl_every must be >= 1");
  if (maxPoints < 2) throw ConfigError("tsne point cap must be >= 2");
}

namespace {

Points squaredDistances(const Points& x) {
  const Eigen::VectorXd norms = x.rowwise().squaredNorm();
  Points d = (-2.0 * x * x.transpose()).colwise() + norms;
  d.rowwise() += norms.transpose();
  d = d.cwiseMax(0.0);
  d.diagonal().setZero();
  return d;
}

// Conditional row for precision beta; returns its entropy in nats.
double conditionalRow(const Points& d, Eigen::Index i, double beta,
                      std::vector<double>& p) {
  const Eigen::Index n = d.rows();
  double minD = std::numeric_limits<double>::infinity();
  for (Eigen::Index j = 0; j < n; ++j) {
    if (j != i) minD = std::min(minD, d(i, j));
  }
  double sum = 0.0;
  double weighted = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    if (j == i) {
      p[j] = 0.0;
      continue;
    }
    const double shifted = d(i, j) - minD;
    p[j] = std::exp(-beta * shifted);
    sum += p[j];
    weighted += shifted * p[j];
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    p[j] /= sum;
  }
  return std::log(sum) + beta * weighted / sum;
}

}  // namespace

Affinities affinities(const Points& x, double perplexity, double tolerance) {
  const Eigen::Index n = x.rows();
  const Points d = squaredDistances(x);
  const double target = std::log(perplexity);
  Affinities a;
  a.entropies.assign(static_cast<std::size_t>(n), 0.0);
  a.precisions.assign(static_cast<std::size_t>(n), 1.0);
  Points cond = Points::Zero(n, n);
  std::vector<double> row(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    double beta = 1.0;
    double lo = 0.0;
    double hi = std::numeric_limits<double>::infinity();
    double h = conditionalRow(d, i, beta, row);
    for (int step = 0; step < 200 && std::abs(h - target) > tolerance; ++step) {
      // Entropy falls as the precision grows.
      if (h > target) {
        lo = beta;
        beta = std::isinf(hi) ? beta * 2.0 : (beta + hi) / 2.0;
      } else {
        hi = beta;
        beta = (beta + lo) / 2.0;
      }
      h = conditionalRow(d, i, beta, row);
    }
    a.entropies[i] = h;
    a.precisions[i] = beta;
    for (Eigen::Index j = 0; j < n; ++j) {
      cond(i, j) = row[j];
    }
  }
  a.joint = (cond + cond.transpose()) / (2.0 * static_cast<double>(n));
  return a;
}

namespace {

double klDivergence(const Points& p, const Points& y) {
  const Eigen::Index n = y.rows();
  const Points d = squaredDistances(y);
  double z = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i != j) z += 1.0 / (1.0 + d(i, j));
    }
  }
  double kl = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j || p(i, j) <= 0.0) continue;
      const double q = std::max(1.0 / (1.0 + d(i, j)) / z,
                                std::numeric_limits<double>::min());
      kl += p(i, j) * std::log(p(i, j) / q);
    }
  }
  return std::max(kl, 0.0);
}

}  // namespace

ProjectedPoints tsne(const Points& x, const TsneOptions& options,
                     std::uint64_t seed) {
  options.validate();
  const auto n = static_cast<std::size_t>(x.rows());
  if (n > options.maxPoints) {
    throw BudgetError("exact t-SNE is limited to " +
                      std::to_string(options.maxPoints) + " points, got " +
                      std::to_string(n) +
                      "; project a word subset instead");
  }
  if (n < 3 || !(options.perplexity > 1.0) ||
      !(options.perplexity < static_cast<double>(n) - 1.0)) {
    throw DataError("t-SNE perplexity must lie in (1, N-1) with N >= 3; got "
                    "perplexity " + std::to_string(options.perplexity) +
                    " for N=" + std::to_string(n));
  }
  const Affinities a = affinities(x, options.perplexity, options.entropyTolerance);
  const Points& p = a.joint;
  const auto rows = static_cast<Eigen::Index>(n);

  Rng rng(seed);
  ProjectedPoints out;
  Points y(rows, 2);
  for (Eigen::Index i = 0; i < rows; ++i) {
    y(i, 0) = 1e-4 * rng.normal();
    y(i, 1) = 1e-4 * rng.normal();
  }
  Points update = Points::Zero(rows, 2);
  Points gains = Points::Ones(rows, 2);
  Points grad(rows, 2);
  Points num(rows, rows);

  for (int it = 1; it <= options.iterations; ++it) {
    const double exag = it <= options.exaggerationIterations ? options.exaggeration : 1.0;
    const double momentum =
        it <= options.momentumSwitch ? options.initialMomentum : options.finalMomentum;
    parallelFor(n, options.threads, [&](std::size_t b, std::size_t e) {
      for (auto i = static_cast<Eigen::Index>(b); i < static_cast<Eigen::Index>(e); ++i) {
        for (Eigen::Index j = 0; j < rows; ++j) {
          num(i, j) = i == j ? 0.0 : 1.0 / (1.0 + (y.row(i) - y.row(j)).squaredNorm());
        }
      }
    });
    double z = 0.0;
    for (Eigen::Index i = 0; i < rows; ++i) {
      z += num.row(i).sum();
    }
    parallelFor(n, options.threads, [&](std::size_t b, std::size_t e) {
      for (auto i = static_cast<Eigen::Index>(b); i < static_cast<Eigen::Index>(e); ++i) {
        double g0 = 0.0, g1 = 0.0;
        for (Eigen::Index j = 0; j < rows; ++j) {
          const double w = (exag * p(i, j) - num(i, j) / z) * num(i, j);
          g0 += w * (y(i, 0) - y(j, 0));
          g1 += w * (y(i, 1) - y(j, 1));
        }
        grad(i, 0) = 4.0 * g0;
        grad(i, 1) = 4.0 * g1;
      }
    });
    for (Eigen::Index i = 0; i < rows; ++i) {
      for (int c = 0; c < 2; ++c) {
        // Grow the gain when the gradient reverses the running update.
        const bool flip = (grad(i, c) > 0.0) != (update(i, c) > 0.0);
        gains(i, c) = std::max(flip ? gains(i, c) + 0.2 : gains(i, c) * 0.8,
                               options.minGain);
        update(i, c) = momentum * update(i, c) -
                       options.learningRate * gains(i, c) * grad(i, c);
        y(i, c) += update(i, c);
      }
    }
    const Eigen::RowVector2d mean = y.colwise().mean();
    y.rowwise() -= mean;
    if (it % options.klEvery == 0 || it == options.iterations) {
      out.klHistory.emplace_back(it, klDivergence(p, y));
    }
  }
  out.kl = out.klHistory.back().second;
  out.coordinates = std::move(y);
  return out;
}

void writeTsneTsv(std::ostream& out, std::span<const std::string> words,
                  const ProjectedPoints& projection) {
  const auto precision = out.precision();
  out << std::setprecision(9);
  for (std::size_t i = 0; i < words.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    out << words[i] << '\t' << projection.coordinates(r, 0) << '\t'
        << projection.coordinates(r, 1) << '\n';
  }
  out.precision(precision);
}

}  // namespace ctelig::analyze
