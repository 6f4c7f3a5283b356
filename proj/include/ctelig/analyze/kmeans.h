#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "ctelig/analyze/points.h"

namespace ctelig::analyze {

// ceil(0.1 * min(wordsRead, 10000)), and at least 1.
std::size_t defaultClusterCount(std::size_t wordsRead);

struct KmeansOptions {
  std::optional<std::size_t> k;  // defaultClusterCount(N) when unset
  std::size_t maxIterations = 300;
  // Stop once an iteration improves inertia by less than this fraction.
  double tolerance = 1e-6;
  unsigned threads = 1;
};

struct ClusterAssignment {
  std::vector<int> cluster;  // per input point, in [0, k)
  Points centroids;          // k rows
  double inertia = 0.0;
  // Inertia after every assignment step, first entry from the seeding.
  std::vector<double> inertiaHistory;
  std::size_t iterations = 0;
  bool converged = false;  // assignments reached a fixpoint
};

// k-means++ seeding followed by Lloyd iterations. The points are processed
// in a canonical (lexicographic) order, so the partition does not depend on
// the order they are given in. An emptied cluster keeps its centroid.
// Throws DataError when k exceeds the point count or k is 0.
ClusterAssignment kmeans(const Points& points, const KmeansOptions& options,
                         std::uint64_t seed);

// "cluster_id<TAB>word", grouped by cluster, words in input order.
void writeClustersTsv(std::ostream& out, std::span<const std::string> words,
                      const ClusterAssignment& clusters);

}  // namespace ctelig::analyze
