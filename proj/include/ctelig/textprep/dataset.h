#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace ctelig::textprep {

enum class Label : int { NotEligible = 0, Eligible = 1 };

const char* toString(Label label) noexcept;

struct LabeledStatement {
  Label label = Label::Eligible;
  std::string text;  // normalized, space-separated
  std::string studyId;
  std::string condition;
  std::string intervention;

  bool operator==(const LabeledStatement&) const = default;
};

// Statements plus per-class counts kept in sync with them.
class Dataset {
 public:
  Dataset() = default;
  explicit Dataset(std::vector<LabeledStatement> statements);

  void add(LabeledStatement statement);

  std::span<const LabeledStatement> statements() const { return statements_; }
  const LabeledStatement& operator[](std::size_t i) const {
    return statements_[i];
  }
  std::size_t size() const { return statements_.size(); }
  bool empty() const { return statements_.empty(); }
  std::size_t count(Label label) const {
    return counts_[static_cast<int>(label)];
  }

  auto begin() const { return statements_.begin(); }
  auto end() const { return statements_.end(); }

 private:
  std::vector<LabeledStatement> statements_;
  std::array<std::size_t, 2> counts_{0, 0};
};

// Undersamples the majority class without replacement down to the minority
// count. Kept statements stay in input order. Throws DataError when a class
// is empty.
Dataset balance(const Dataset& dataset, std::uint64_t seed);

// Stratified, shuffled split; each class contributes round(fraction * n_c)
// statements to the test side.
std::pair<Dataset, Dataset> splitTrainTest(const Dataset& dataset,
                                           double testFraction,
                                           std::uint64_t seed);

inline constexpr double kDefaultTestFraction = 0.2;

}  // namespace ctelig::textprep
