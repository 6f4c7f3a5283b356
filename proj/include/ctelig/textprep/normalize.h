#pragma once

#include <string>
#include <string_view>

namespace ctelig::textprep {

enum class NumberStyle {
  DigitWise,  // "18" -> "one eight"
  Cardinal,   // "18" -> "eighteen"
};

struct NormalizeOptions {
  NumberStyle numbers = NumberStyle::DigitWise;
};

// Produces a lowercase sequence of words separated by single spaces.
//
// Comparators become words (">=" greater_equal, "<=" less_equal, ">"
// greater_than, "<" less_than, "=" equal; also the Unicode forms). "+" is
// "positive" when attached to an alphanumeric neighbour. "-" is "negative"
// when it trails a token ("her2-") or precedes a number ("-5"); between two
// alphanumerics it is a hyphen and separates. Numbers are spelled out.
// Everything else that is not a letter is a separator, and single-character
// words are dropped. Stop words are kept.
std::string normalize(std::string_view text, const NormalizeOptions& options = {});

// English words for a non-negative integer below one trillion.
std::string cardinalWords(unsigned long long value);

}  // namespace ctelig::textprep
