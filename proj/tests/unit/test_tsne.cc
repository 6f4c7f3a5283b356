#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ctelig/analyze/tsne.h"
#include "ctelig/common/errors.h"
#include "ctelig/common/random.h"

using namespace ctelig;
using namespace ctelig::analyze;

namespace {

Points gaussian(std::size_t n, std::size_t dim, std::uint64_t seed) {
  Rng rng(seed);
  Points x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
      x(i, c) = rng.normal() + (i % 3 == 0 ? 5.0 : 0.0);
    }
  }
  return x;
}

// Entropy of the conditional distribution at a given precision, evaluated
// directly from pairwise distances.
double directEntropy(const Points& x, Eigen::Index i, double beta) {
  std::vector<double> w;
  double z = 0.0;
  for (Eigen::Index j = 0; j < x.rows(); ++j) {
    if (j == i) continue;
    w.push_back(std::exp(-beta * (x.row(i) - x.row(j)).squaredNorm()));
    z += w.back();
  }
  double h = 0.0;
  for (double v : w) {
    const double p = v / z;
    if (p > 0) h -= p * std::log(p);
  }
  return h;
}

}  // namespace

TEST_CASE("bandwidth search matches the target perplexity") {
  auto x = gaussian(60, 5, 3);
  for (double perp : {2.0, 5.0, 15.0}) {
    auto a = affinities(x, perp, 1e-4);
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      CHECK(std::abs(a.entropies[i] - std::log(perp)) <= 1e-4);
      CHECK(std::abs(directEntropy(x, i, a.precisions[i]) - std::log(perp)) <= 1e-4);
    }
    CHECK(a.joint.sum() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK((a.joint - a.joint.transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(a.joint.diagonal().cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("three points give three finite coordinate pairs") {
  auto x = gaussian(3, 4, 1);
  TsneOptions o;
  o.perplexity = 1.5;
  o.iterations = 300;
  auto r = tsne(x, o, 5);
  CHECK(r.coordinates.rows() == 3);
  CHECK(r.coordinates.cols() == 2);
  CHECK(std::isfinite(r.kl));
  CHECK(r.kl >= 0.0);
  CHECK(r.coordinates.allFinite());
}

TEST_CASE("a duplicated point lands next to its twin") {
  auto x = gaussian(20, 8, 17);
  x.row(19) = x.row(4);
  TsneOptions o;
  o.perplexity = 5.0;
  auto r = tsne(x, o, 2);
  std::vector<double> d;
  for (Eigen::Index i = 0; i < 20; ++i) {
    for (Eigen::Index j = i + 1; j < 20; ++j) {
      d.push_back((r.coordinates.row(i) - r.coordinates.row(j)).norm());
    }
  }
  const double twin = (r.coordinates.row(4) - r.coordinates.row(19)).norm();
  const auto rank = std::count_if(d.begin(), d.end(), [&](double v) { return v < twin; });
  CHECK(rank <= 2);
}

TEST_CASE("KL after the full run is no worse than early on") {
  auto x = gaussian(100, 10, 4);
  TsneOptions o;
  o.perplexity = 10.0;
  auto r = tsne(x, o, 9);
  double at100 = -1, at1000 = -1;
  for (auto [it, kl] : r.klHistory) {
    if (it == 100) at100 = kl;
    if (it == 1000) at1000 = kl;
  }
  REQUIRE(at100 >= 0.0);
  REQUIRE(at1000 >= 0.0);
  CHECK(at1000 <= at100);
  CHECK(r.kl == at1000);
}

TEST_CASE("t-SNE is deterministic and thread-invariant") {
  auto x = gaussian(40, 6, 8);
  TsneOptions o;
  o.perplexity = 8.0;
  o.iterations = 200;
  auto a = tsne(x, o, 3);
  auto b = tsne(x, o, 3);
  CHECK(a.coordinates == b.coordinates);
  o.threads = 3;
  auto c = tsne(x, o, 3);
  CHECK(a.coordinates == c.coordinates);
  auto d = tsne(x, TsneOptions{.perplexity = 8.0, .iterations = 200}, 4);
  CHECK(a.coordinates != d.coordinates);
}

TEST_CASE("t-SNE refusals") {
  TsneOptions o;
  o.maxPoints = 10;
  o.perplexity = 3.0;
  CHECK_THROWS_AS(tsne(gaussian(11, 2, 1), o, 1), BudgetError);
  o.perplexity = 1.0;
  CHECK_THROWS_AS(tsne(gaussian(10, 2, 1), o, 1), DataError);
  o.perplexity = 9.0;
  CHECK_THROWS_AS(tsne(gaussian(10, 2, 1), o, 1), DataError);
  o.perplexity = 3.0;
  o.iterations = 0;
  CHECK_THROWS_AS(tsne(gaussian(10, 2, 1), o, 1), ConfigError);
}

TEST_CASE("t-SNE output format") {
  ProjectedPoints p;
  p.coordinates.resize(2, 2);
  p.coordinates << 1.5, -2, 0, 0.25;
  std::vector<std::string> words{"tumor", "lymphoma"};
  std::ostringstream os;
  writeTsneTsv(os, words, p);
  CHECK(os.str() == "tumor\t1.5\t-2\nlymphoma\t0\t0.25\n");
}
