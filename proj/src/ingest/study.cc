#include "ctelig/ingest/study.h"

#include <array>
#include <boost/property_tree/detail/rapidxml.hpp>
#include <cctype>

namespace ctelig::ingest {

namespace rx = boost::property_tree::detail::rapidxml;

namespace {

constexpr std::array<std::string_view, 4> kOncologyKeys = {
    "cancer", "neoplasm", "oma", "tumor"};

std::string lowercase(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

// Concatenated character data of an element's direct text and CDATA children.
std::string textOf(const rx::xml_node<char>* node) {
  std::string out;
  for (auto* child = node->first_node(); child != nullptr;
       child = child->next_sibling()) {
    if (child->type() == rx::node_data || child->type() == rx::node_cdata) {
      out.append(child->value(), child->value_size());
    }
  }
  return out;
}

std::string trimmed(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) {
    return {};
  }
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

bool endsWith(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() &&
         s.substr(s.size() - suffix.size()) == suffix;
}

bool tokenMatches(std::string_view token) {
  for (auto key : kOncologyKeys) {
    if (endsWith(token, key)) {
      return true;
    }
    if (!token.empty() && token.back() == 's' &&
        endsWith(token.substr(0, token.size() - 1), key)) {
      return true;
    }
  }
  return false;
}

}  // namespace

XmlParseError::XmlParseError(const std::string& message, std::size_t offset)
    : DataError("malformed XML at byte " + std::to_string(offset) + ": " +
                message),
      offset_(offset) {}

bool isValidStudyId(std::string_view id) {
  if (id.size() != 11 || id.substr(0, 3) != "NCT") {
    return false;
  }
  for (char c : id.substr(3)) {
    if (!std::isdigit(static_cast<unsigned char>(c))) {
      return false;
    }
  }
  return true;
}

RawStudy parseStudy(std::string_view xmlDocument) {
  // rapidxml parses in place and needs a terminated mutable buffer.
  std::vector<char> buffer(xmlDocument.begin(), xmlDocument.end());
  buffer.push_back('\0');
  rx::xml_document<char> doc;
  try {
    doc.parse<rx::parse_validate_closing_tags>(buffer.data());
  } catch (const rx::parse_error& e) {
    const char* where = e.where<char>();
    const auto offset = static_cast<std::size_t>(where - buffer.data());
    throw XmlParseError(e.what(), offset);
  }

  const auto* root = doc.first_node("clinical_study");
  if (root == nullptr) {
    throw SchemaError("missing <clinical_study> root element");
  }

  RawStudy study;
  if (const auto* idInfo = root->first_node("id_info")) {
    if (const auto* nct = idInfo->first_node("nct_id")) {
      study.studyId = trimmed(textOf(nct));
    }
  }
  if (study.studyId.empty()) {
    throw SchemaError("missing study identifier <id_info>/<nct_id>");
  }
  if (!isValidStudyId(study.studyId)) {
    throw SchemaError("study identifier '" + study.studyId +
                      "' is not NCT followed by 8 digits");
  }

  for (auto* node = root->first_node("condition"); node != nullptr;
       node = node->next_sibling("condition")) {
    study.conditions.push_back(trimmed(textOf(node)));
  }
  for (auto* node = root->first_node("intervention"); node != nullptr;
       node = node->next_sibling("intervention")) {
    if (const auto* name = node->first_node("intervention_name")) {
      study.interventions.push_back(trimmed(textOf(name)));
    }
  }
  if (const auto* eligibility = root->first_node("eligibility")) {
    if (const auto* criteria = eligibility->first_node("criteria")) {
      if (const auto* block = criteria->first_node("textblock")) {
        study.criteriaText = textOf(block);
      }
    }
  }
  return study;
}

bool filterOncology(const RawStudy& study, OncologyMatch mode) {
  for (const auto& condition : study.conditions) {
    const std::string lower = lowercase(condition);
    if (mode == OncologyMatch::Substring) {
      for (auto key : kOncologyKeys) {
        if (lower.find(key) != std::string::npos) {
          return true;
        }
      }
      continue;
    }
    std::string token;
    for (std::size_t i = 0; i <= lower.size(); ++i) {
      const bool word = i < lower.size() &&
                        std::isalnum(static_cast<unsigned char>(lower[i]));
      if (word) {
        token.push_back(lower[i]);
      } else if (!token.empty()) {
        if (tokenMatches(token)) {
          return true;
        }
        token.clear();
      }
    }
  }
  return false;
}

}  // namespace ctelig::ingest
