#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "ctelig/textprep/dataset.h"
#include "ctelig/textprep/normalize.h"
#include "ctelig/textprep/splitter.h"

namespace ctelig::textprep {

struct LabelResult {
  Label label;
  std::string text;
};

// Exclusion statements are NotEligible as-is. Inclusion and unspecified
// statements are Eligible unless their first token is "no", in which case
// the "no" is dropped and the statement becomes NotEligible.
LabelResult label(Section section, std::string_view normalizedText);
LabelResult label(const SectionedCriterion& criterion);

enum class AugmentOrder { ConditionFirst, InterventionFirst };

struct AugmentOptions {
  std::string conditionPrefix = "patients diagnosed with";
  std::string interventionPrefix = "treated with";
  AugmentOrder order = AugmentOrder::ConditionFirst;
  NormalizeOptions normalize;
};

struct AugmentedText {
  std::string text;
  std::string condition;     // source string, empty when none
  std::string intervention;  // source string, empty when none
};

// One output per (condition, intervention) pair; an empty list contributes a
// single empty element and its clause is omitted, so the criterion is never
// dropped.
std::vector<AugmentedText> augment(const SectionedCriterion& criterion,
                                   const std::vector<std::string>& conditions,
                                   const std::vector<std::string>& interventions,
                                   const AugmentOptions& options = {});

}  // namespace ctelig::textprep
