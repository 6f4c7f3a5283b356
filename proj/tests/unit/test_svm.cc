#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "classify_fixtures.h"
#include "ctelig/classify/svm.h"
#include "ctelig/common/errors.h"

using namespace ctelig;
using namespace ctelig::classify;

namespace {

FeatureMatrix points(const std::vector<std::vector<double>>& rows) {
  FeatureMatrix m(static_cast<Eigen::Index>(rows.size()),
                  static_cast<Eigen::Index>(rows[0].size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows[r].size(); ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    }
  }
  return m;
}

std::span<const double> rowOf(const FeatureMatrix& m, Eigen::Index r) {
  return {m.data() + r * m.cols(), static_cast<std::size_t>(m.cols())};
}

// Decision value computed straight from the dual variables.
double dualDecision(const FeatureMatrix& x, const std::vector<int>& y, const SvmSolution& s,
                    std::span<const double> q, double gamma) {
  double f = s.bias;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    double d2 = 0;
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      const double diff = x(i, j) - q[static_cast<std::size_t>(j)];
      d2 += diff * diff;
    }
    f += s.alpha[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(i)] *
         std::exp(-gamma * d2);
  }
  return f;
}

void blobs(std::size_t n, std::uint32_t seed, FeatureMatrix& x, std::vector<int>& y) {
  std::mt19937 gen(seed);
  std::normal_distribution<double> noise(0.0, 0.8);
  x.resize(static_cast<Eigen::Index>(n), 3);
  y.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const int label = i % 2 ? 1 : -1;
    y[i] = label;
    for (int j = 0; j < 3; ++j) x(static_cast<Eigen::Index>(i), j) = 0.6 * label + noise(gen);
  }
}

}  // namespace

TEST_CASE("two points become support vectors") {
  const auto x = points({{0.0, 0.0}, {1.0, 1.0}});
  const std::vector<int> y{-1, 1};
  const auto sol = solveSvm(x, y, {});
  CHECK(sol.alpha[0] > 0);
  CHECK(sol.alpha[1] > 0);
  const auto m = SvmMachine::fromSolution(x, y, sol, 1.0);
  CHECK(m.supportVectors().rows() == 2);
  CHECK(m.decision(rowOf(x, 0)) < 0);
  CHECK(m.decision(rowOf(x, 1)) > 0);
}

TEST_CASE("XOR is separated and matches the analytic dual") {
  const auto x = points({{1, 1}, {-1, -1}, {1, -1}, {-1, 1}});
  const std::vector<int> y{1, 1, -1, -1};
  const auto sol = solveSvm(x, y, {});
  // By symmetry all multipliers are equal; the unconstrained value
  // 1 / (1 + e^-8 - 2 e^-4) exceeds C = 1, so each sits at C and b = 0.
  const double unconstrained = 1.0 / (1.0 + std::exp(-8.0) - 2.0 * std::exp(-4.0));
  REQUIRE(unconstrained > 1.0);
  for (double a : sol.alpha) CHECK(a == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(std::abs(sol.bias) < 1e-9);
  const auto m = SvmMachine::fromSolution(x, y, sol, 1.0);
  for (Eigen::Index i = 0; i < 4; ++i) {
    CHECK((m.decision(rowOf(x, i)) > 0) == (y[static_cast<std::size_t>(i)] > 0));
  }
}

TEST_CASE("KKT conditions hold at convergence") {
  FeatureMatrix x;
  std::vector<int> y;
  blobs(120, 3, x, y);
  SvmHyper hyper;
  const auto sol = solveSvm(x, y, hyper);
  CHECK(sol.gap < hyper.tolerance);
  double worst = 0;
  double balance = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double a = sol.alpha[i];
    CHECK(a >= 0);
    CHECK(a <= hyper.c);
    balance += a * y[i];
    const double margin = y[i] * dualDecision(x, y, sol, rowOf(x, static_cast<Eigen::Index>(i)),
                                              hyper.gamma);
    double violation = 0;
    if (a <= 0) violation = std::max(0.0, 1 - margin);
    else if (a >= hyper.c) violation = std::max(0.0, margin - 1);
    else violation = std::abs(margin - 1);
    worst = std::max(worst, violation);
  }
  CHECK(worst <= 1e-3);
  CHECK(std::abs(balance) < 1e-9);
}

TEST_CASE("decision function is invariant to training order") {
  FeatureMatrix x;
  std::vector<int> y;
  blobs(80, 5, x, y);
  std::vector<std::size_t> perm(y.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), std::mt19937(7));
  FeatureMatrix px(x.rows(), x.cols());
  std::vector<int> py(y.size());
  for (std::size_t i = 0; i < perm.size(); ++i) {
    px.row(static_cast<Eigen::Index>(i)) = x.row(static_cast<Eigen::Index>(perm[i]));
    py[i] = y[perm[i]];
  }
  SvmHyper hyper;
  hyper.tolerance = 1e-6;
  const auto a = SvmMachine::fromSolution(x, y, solveSvm(x, y, hyper), 1.0);
  const auto b = SvmMachine::fromSolution(px, py, solveSvm(px, py, hyper), 1.0);
  std::mt19937 gen(11);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int t = 0; t < 200; ++t) {
    const std::vector<double> q{u(gen), u(gen), u(gen)};
    CHECK(a.decision(q) == doctest::Approx(b.decision(q)).epsilon(1e-4).scale(1.0));
  }
}

TEST_CASE("shrinking does not change the solution") {
  FeatureMatrix x;
  std::vector<int> y;
  blobs(150, 9, x, y);
  SvmHyper with, without;
  without.shrinking = false;
  with.tolerance = without.tolerance = 1e-6;
  const auto a = solveSvm(x, y, with);
  const auto b = solveSvm(x, y, without);
  for (std::size_t i = 0; i < y.size(); ++i) {
    CHECK(a.alpha[i] == doctest::Approx(b.alpha[i]).epsilon(1e-3).scale(1.0));
  }
}

TEST_CASE("svm refusals") {
  const auto x = points({{0.0}, {1.0}, {2.0}});
  CHECK_THROWS_AS(solveSvm(x, std::vector<int>{1, 1, 1}, {}), DataError);
  SvmHyper small;
  small.budget = 2;
  CHECK_THROWS_AS(solveSvm(x, std::vector<int>{1, -1, 1}, small), BudgetError);
}

TEST_CASE("svm model predicts through sentence vectors") {
  const auto emb = testing::handModel({"good", "bad"}, {{1, 0}, {-1, 0}});
  textprep::Dataset data;
  data.add({textprep::Label::Eligible, "good"});
  data.add({textprep::Label::NotEligible, "bad"});
  const auto model = trainSvm(data, EmbeddingSource::inMemory(emb), {});
  CHECK(model->predict("good good").label == textprep::Label::Eligible);
  const auto p = model->predict("bad");
  CHECK(p.label == textprep::Label::NotEligible);
  CHECK(p.scores[0] + p.scores[1] == doctest::Approx(1.0));
  CHECK(model->predict("unknown").lowConfidence);
}
