#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "ctelig/common/errors.h"

namespace ctelig::ingest {

// Fields extracted from one registry study record.
struct RawStudy {
  std::string studyId;  // "NCT" + 8 digits
  std::vector<std::string> conditions;
  std::vector<std::string> interventions;
  // Eligibility text block exactly as stored in the record (entities decoded,
  // whitespace untouched).
  std::string criteriaText;

  bool operator==(const RawStudy&) const = default;
};

// The document is not well-formed XML.
class XmlParseError : public DataError {
 public:
  XmlParseError(const std::string& message, std::size_t offset);
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

// Well-formed XML that lacks a required registry field.
class SchemaError : public DataError {
 public:
  using DataError::DataError;
};

bool isValidStudyId(std::string_view id);

RawStudy parseStudy(std::string_view xmlDocument);

enum class OncologyMatch {
  // Case-insensitive containment anywhere in the condition string.
  Substring,
  // A word token must equal or end with a keyword (optionally plural "s").
  StrictToken,
};

bool filterOncology(const RawStudy& study,
                    OncologyMatch mode = OncologyMatch::Substring);

}  // namespace ctelig::ingest
