#include "ctelig/analyze/kmeans.h"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <numeric>

#include "ctelig/common/errors.h"
#include "ctelig/common/parallel.h"
#include "ctelig/common/random.h"

namespace ctelig::analyze {

std::size_t defaultClusterCount(std::size_t wordsRead) {
  const std::size_t n = std::min<std::size_t>(wordsRead, 10000);
  return std::max<std::size_t>(1, (n + 9) / 10);
}

namespace {

// Nearest centroid per point (lowest index on ties); returns inertia and
// whether any assignment changed.
std::pair<double, bool> assign(const Points& x, const Points& centroids,
                               std::vector<int>& cluster,
                               std::vector<double>& dist, unsigned threads) {
  std::vector<char> changed(static_cast<std::size_t>(x.rows()), 0);
  parallelFor(static_cast<std::size_t>(x.rows()), threads,
              [&](std::size_t b, std::size_t e) {
                for (std::size_t i = b; i < e; ++i) {
                  const auto row = x.row(static_cast<Eigen::Index>(i));
                  int best = 0;
                  double bestD = std::numeric_limits<double>::infinity();
                  for (Eigen::Index c = 0; c < centroids.rows(); ++c) {
                    const double d = (row - centroids.row(c)).squaredNorm();
                    if (d < bestD) {
                      bestD = d;
                      best = static_cast<int>(c);
                    }
                  }
                  changed[i] = cluster[i] != best;
                  cluster[i] = best;
                  dist[i] = bestD;
                }
              });
  double inertia = 0.0;
  bool any = false;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    inertia += dist[i];
    any = any || changed[i];
  }
  return {inertia, any};
}

void updateCentroids(const Points& x, const std::vector<int>& cluster,
                     Points& centroids) {
  Points sums = Points::Zero(centroids.rows(), centroids.cols());
  std::vector<std::size_t> counts(static_cast<std::size_t>(centroids.rows()), 0);
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    sums.row(cluster[i]) += x.row(i);
    ++counts[cluster[i]];
  }
  for (Eigen::Index c = 0; c < centroids.rows(); ++c) {
    if (counts[c] > 0) {
      centroids.row(c) = sums.row(c) / static_cast<double>(counts[c]);
    }
  }
}

Points seedPlusPlus(const Points& x, std::size_t k, Rng& rng) {
  const auto n = static_cast<std::size_t>(x.rows());
  Points centroids(static_cast<Eigen::Index>(k), x.cols());
  std::vector<double> d2(n, std::numeric_limits<double>::infinity());
  std::vector<char> chosen(n, 0);
  std::size_t pick = static_cast<std::size_t>(rng.below(n));
  for (std::size_t c = 0; c < k; ++c) {
    chosen[pick] = 1;
    centroids.row(static_cast<Eigen::Index>(c)) = x.row(static_cast<Eigen::Index>(pick));
    if (c + 1 == k) {
      break;
    }
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      d2[i] = std::min(d2[i], (x.row(static_cast<Eigen::Index>(i)) -
                               centroids.row(static_cast<Eigen::Index>(c)))
                                  .squaredNorm());
      total += d2[i];
    }
    if (total > 0.0) {
      double r = rng.uniform() * total;
      pick = n;
      for (std::size_t i = 0; i < n; ++i) {
        if (d2[i] <= 0.0) {
          continue;
        }
        pick = i;
        r -= d2[i];
        if (r < 0.0) {
          break;
        }
      }
    } else {
      // Every remaining point coincides with a centroid.
      std::vector<std::size_t> rest;
      for (std::size_t i = 0; i < n; ++i) {
        if (!chosen[i]) {
          rest.push_back(i);
        }
      }
      pick = rest[static_cast<std::size_t>(rng.below(rest.size()))];
    }
  }
  return centroids;
}

}  // namespace

ClusterAssignment kmeans(const Points& points, const KmeansOptions& options,
                         std::uint64_t seed) {
  const auto n = static_cast<std::size_t>(points.rows());
  const std::size_t k = options.k.value_or(defaultClusterCount(n));
  if (k == 0 || k > n) {
    throw DataError("k-means needs 1 <= k <= " + std::to_string(n) +
                    " points, got k=" + std::to_string(k));
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    for (Eigen::Index c = 0; c < points.cols(); ++c) {
      const double u = points(static_cast<Eigen::Index>(a), c);
      const double v = points(static_cast<Eigen::Index>(b), c);
      if (u != v) {
        return u < v;
      }
    }
    return false;
  });
  Points x(points.rows(), points.cols());
  for (std::size_t i = 0; i < n; ++i) {
    x.row(static_cast<Eigen::Index>(i)) = points.row(static_cast<Eigen::Index>(order[i]));
  }

  Rng rng(seed);
  ClusterAssignment out;
  out.centroids = seedPlusPlus(x, k, rng);
  std::vector<int> cluster(n, -1);
  std::vector<double> dist(n, 0.0);
  out.inertia = assign(x, out.centroids, cluster, dist, options.threads).first;
  out.inertiaHistory.push_back(out.inertia);
  for (std::size_t it = 0; it < options.maxIterations; ++it) {
    updateCentroids(x, cluster, out.centroids);
    const auto [inertia, changed] =
        assign(x, out.centroids, cluster, dist, options.threads);
    const double previous = out.inertia;
    // Both Lloyd steps can only lower inertia; allow for rounding.
    assert(inertia <= previous * (1.0 + 1e-12) + 1e-300);
    out.inertia = inertia;
    out.inertiaHistory.push_back(inertia);
    out.iterations = it + 1;
    if (!changed) {
      out.converged = true;
      break;
    }
    if (previous - inertia <= options.tolerance * previous) {
      break;
    }
  }
  out.cluster.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    out.cluster[order[i]] = cluster[i];
  }
  return out;
}

void writeClustersTsv(std::ostream& out, std::span<const std::string> words,
                      const ClusterAssignment& clusters) {
  std::vector<std::size_t> order(words.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return clusters.cluster[a] < clusters.cluster[b];
  });
  for (auto i : order) {
    out << clusters.cluster[i] << '\t' << words[i] << '\n';
  }
}

}  // namespace ctelig::analyze
