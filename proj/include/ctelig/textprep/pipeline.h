#pragma once

#include <vector>

#include "ctelig/ingest/study.h"
#include "ctelig/textprep/labeling.h"

namespace ctelig::textprep {

// Bumped whenever splitting, normalization or labeling changes output.
inline constexpr const char* kPipelineVersion = "textprep-1";

struct PreprocessOptions {
  AugmentOptions augment;
};

// split -> normalize -> label -> augment for one study, in statement order.
// Studies without criteria text yield nothing.
std::vector<LabeledStatement> preprocessStudy(const ingest::RawStudy& study,
                                              const PreprocessOptions& options = {});

}  // namespace ctelig::textprep
