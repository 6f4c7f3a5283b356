#include "ctelig/textprep/labeling.h"

namespace ctelig::textprep {

LabelResult label(Section section, std::string_view text) {
  if (section == Section::Exclusion) {
    return {Label::NotEligible, std::string(text)};
  }
  if (text == "no") {
    return {Label::NotEligible, {}};
  }
  if (text.substr(0, 3) == "no ") {
    return {Label::NotEligible, std::string(text.substr(3))};
  }
  return {Label::Eligible, std::string(text)};
}

LabelResult label(const SectionedCriterion& criterion) {
  return label(criterion.section, criterion.text);
}

std::vector<AugmentedText> augment(const SectionedCriterion& criterion,
                                   const std::vector<std::string>& conditions,
                                   const std::vector<std::string>& interventions,
                                   const AugmentOptions& options) {
  static const std::vector<std::string> kNone{std::string()};
  const auto& conds = conditions.empty() ? kNone : conditions;
  const auto& ints = interventions.empty() ? kNone : interventions;
  const std::string base = normalize(criterion.text, options.normalize);

  auto clause = [&](const std::string& prefix, const std::string& value) {
    const std::string norm = normalize(value, options.normalize);
    return norm.empty() ? std::string() : " " + prefix + " " + norm;
  };

  std::vector<AugmentedText> out;
  out.reserve(conds.size() * ints.size());
  for (const auto& condition : conds) {
    const std::string condClause = clause(options.conditionPrefix, condition);
    for (const auto& intervention : ints) {
      const std::string intClause =
          clause(options.interventionPrefix, intervention);
      std::string text = base;
      if (options.order == AugmentOrder::ConditionFirst) {
        text += condClause + intClause;
      } else {
        text += intClause + condClause;
      }
      // Leading clause when the criterion itself normalizes to nothing.
      if (!text.empty() && text.front() == ' ') {
        text.erase(0, 1);
      }
      out.push_back({std::move(text), condition, intervention});
    }
  }
  return out;
}

}  // namespace ctelig::textprep
