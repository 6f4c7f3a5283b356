#include "ctelig/textprep/pipeline.h"

namespace ctelig::textprep {

std::vector<LabeledStatement> preprocessStudy(const ingest::RawStudy& study,
                                              const PreprocessOptions& options) {
  std::vector<LabeledStatement> out;
  for (auto& criterion : splitStatements(study.criteriaText, study.studyId)) {
    auto labeled = label(criterion.section,
                         normalize(criterion.text, options.augment.normalize));
    if (labeled.text.empty()) {
      continue;
    }
    criterion.text = std::move(labeled.text);
    for (auto& a : augment(criterion, study.conditions, study.interventions,
                           options.augment)) {
      out.push_back({labeled.label, std::move(a.text), study.studyId,
                     std::move(a.condition), std::move(a.intervention)});
    }
  }
  return out;
}

}  // namespace ctelig::textprep
