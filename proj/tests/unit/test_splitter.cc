#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "ctelig/textprep/splitter.h"

using namespace ctelig::textprep;

namespace {

struct GoldenCase {
  std::string name;
  std::string input;
  std::vector<std::pair<Section, std::string>> expected;
};

std::vector<GoldenCase> loadGolden(const std::filesystem::path& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::vector<GoldenCase> cases;
  std::string line;
  bool inExpected = false;
  while (std::getline(in, line)) {
    if (line.rfind("#", 0) == 0) continue;
    if (line.rfind("=== ", 0) == 0) {
      cases.push_back({line.substr(4), {}, {}});
      inExpected = false;
    } else if (line == "--- expected") {
      inExpected = true;
    } else if (inExpected) {
      if (line.empty()) continue;
      const Section s = line[0] == 'I'   ? Section::Inclusion
                        : line[0] == 'E' ? Section::Exclusion
                                         : Section::Unspecified;
      cases.back().expected.emplace_back(s, line.substr(2));
    } else {
      cases.back().input += line + "\n";
    }
  }
  return cases;
}

}  // namespace

TEST_CASE("figure example yields two inclusion and one exclusion statement") {
  const auto out = splitStatements(
      "Inclusion Criteria:\n- Age over 18\n- ECOG 0-1\nExclusion Criteria:\n- Prior chemotherapy",
      "NCT00000001");
  REQUIRE(out.size() == 3);
  CHECK(out[0] == SectionedCriterion{Section::Inclusion, "Age over 18", "NCT00000001"});
  CHECK(out[1] == SectionedCriterion{Section::Inclusion, "ECOG 0-1", "NCT00000001"});
  CHECK(out[2] == SectionedCriterion{Section::Exclusion, "Prior chemotherapy", "NCT00000001"});
}

TEST_CASE("headerless bullets are unspecified") {
  const auto out = splitStatements("- one item\n- two item\n- three item\n");
  REQUIRE(out.size() == 3);
  for (const auto& c : out) CHECK(c.section == Section::Unspecified);
}

TEST_CASE("empty and whitespace input") {
  CHECK(splitStatements("").empty());
  CHECK(splitStatements("  \n\n\t \n").empty());
  CHECK(splitStatements("Inclusion Criteria:\n\nExclusion Criteria:\n").empty());
}

TEST_CASE("golden split fixtures") {
  for (const auto& c : loadGolden(std::filesystem::path(CTELIG_FIXTURES) / "splits" / "golden.txt")) {
    CAPTURE(c.name);
    const auto out = splitStatements(c.input);
    std::vector<std::pair<Section, std::string>> got;
    for (const auto& s : out) got.emplace_back(s.section, s.text);
    CHECK(got == c.expected);
  }
}

TEST_CASE("statements are trimmed and never empty") {
  const auto out = splitStatements("Inclusion Criteria:\n  -   \n  -  spaced out   \n*\n");
  REQUIRE(out.size() == 1);
  CHECK(out[0].text == "spaced out");
}
