#include "ctelig/textprep/dataset.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ctelig/common/errors.h"
#include "ctelig/common/random.h"

namespace ctelig::textprep {

const char* toString(Label label) noexcept {
  return label == Label::Eligible ? "Eligible" : "NotEligible";
}

Dataset::Dataset(std::vector<LabeledStatement> statements)
    : statements_(std::move(statements)) {
  for (const auto& s : statements_) {
    ++counts_[static_cast<int>(s.label)];
  }
}

void Dataset::add(LabeledStatement statement) {
  ++counts_[static_cast<int>(statement.label)];
  statements_.push_back(std::move(statement));
}

namespace {

std::array<std::vector<std::size_t>, 2> indicesByClass(const Dataset& d) {
  std::array<std::vector<std::size_t>, 2> out;
  for (std::size_t i = 0; i < d.size(); ++i) {
    out[static_cast<int>(d[i].label)].push_back(i);
  }
  return out;
}

}  // namespace

Dataset balance(const Dataset& dataset, std::uint64_t seed) {
  if (dataset.count(Label::Eligible) == 0 ||
      dataset.count(Label::NotEligible) == 0) {
    throw DataError("cannot balance a dataset with an empty class (eligible=" +
                    std::to_string(dataset.count(Label::Eligible)) +
                    ", not eligible=" +
                    std::to_string(dataset.count(Label::NotEligible)) + ")");
  }
  auto byClass = indicesByClass(dataset);
  const std::size_t target = std::min(byClass[0].size(), byClass[1].size());
  Rng rng(seed);
  std::vector<char> keep(dataset.size(), 0);
  for (auto& indices : byClass) {
    if (indices.size() > target) {
      rng.shuffle(indices);
      indices.resize(target);
    }
    for (auto i : indices) {
      keep[i] = 1;
    }
  }
  Dataset out;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    if (keep[i]) {
      out.add(dataset[i]);
    }
  }
  return out;
}

std::pair<Dataset, Dataset> splitTrainTest(const Dataset& dataset,
                                           double testFraction,
                                           std::uint64_t seed) {
  if (!(testFraction > 0.0 && testFraction < 1.0)) {
    throw std::invalid_argument("test fraction must lie in (0, 1), got " +
                                std::to_string(testFraction));
  }
  auto byClass = indicesByClass(dataset);
  Rng rng(seed);
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
  for (auto& indices : byClass) {
    rng.shuffle(indices);
    const auto nTest = static_cast<std::size_t>(
        std::llround(testFraction * static_cast<double>(indices.size())));
    test.insert(test.end(), indices.begin(), indices.begin() + nTest);
    train.insert(train.end(), indices.begin() + nTest, indices.end());
  }
  rng.shuffle(train);
  rng.shuffle(test);
  Dataset trainSet;
  Dataset testSet;
  for (auto i : train) {
    trainSet.add(dataset[i]);
  }
  for (auto i : test) {
    testSet.add(dataset[i]);
  }
  return {std::move(trainSet), std::move(testSet)};
}

}  // namespace ctelig::textprep
