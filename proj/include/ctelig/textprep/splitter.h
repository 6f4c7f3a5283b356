#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace ctelig::textprep {

enum class Section { Inclusion, Exclusion, Unspecified };

const char* toString(Section section) noexcept;

struct SectionedCriterion {
  Section section = Section::Unspecified;
  std::string text;  // raw statement, trimmed, never empty
  std::string studyId;

  bool operator==(const SectionedCriterion&) const = default;
};

// Splits an eligibility block into statements.
//
// Rules, applied line by line:
//  * a blank line ends the current statement;
//  * a line starting with a bullet ("-", "*", "o", "•", "·", "–") or an
//    enumerator ("1.", "2)", "(3)", "a.", "b)", "(c)", "iv.") starts a new
//    statement; any other non-blank line continues the current one;
//  * a line whose text contains "inclusion criteria" / "exclusion criteria"
//    (at most three words before it, followed by nothing, ':', '-' or '(')
//    is a section header; text after its colon starts a new statement;
//  * within a statement, a period followed by whitespace and an uppercase
//    letter ends a sentence unless the word before it is a known
//    abbreviation or a single letter.
// Dots, semicolons and hyphens inside tokens ("T3.N0.M0", "p53;wt") never
// split.
std::vector<SectionedCriterion> splitStatements(std::string_view criteriaText,
                                                std::string_view studyId = {});

}  // namespace ctelig::textprep
