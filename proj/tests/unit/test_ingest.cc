#include <doctest.h>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <filesystem>
#include <sstream>

#include "ctelig/common/files.h"
#include "ctelig/ingest/registry.h"
#include "ctelig/ingest/study.h"

using namespace ctelig;
using namespace ctelig::ingest;
namespace fs = std::filesystem;

namespace {

const fs::path kFixtures = CTELIG_FIXTURES;

std::string minimalStudy(const std::string& body) {
  return "<clinical_study><id_info><nct_id>NCT01234567</nct_id></id_info>" +
         body + "</clinical_study>";
}

}  // namespace

TEST_CASE("parse_study extracts conditions, interventions and criteria") {
  const auto study = parseStudy(minimalStudy(
      "<condition>Breast Neoplasms</condition>"
      "<intervention><intervention_type>Drug</intervention_type>"
      "<intervention_name>Tamoxifen</intervention_name></intervention>"
      "<eligibility><criteria><textblock>\n  Inclusion Criteria:\n  - Age &gt; 18\n"
      "</textblock></criteria></eligibility>"));
  CHECK(study.studyId == "NCT01234567");
  CHECK(study.conditions == std::vector<std::string>{"Breast Neoplasms"});
  CHECK(study.interventions == std::vector<std::string>{"Tamoxifen"});
  CHECK(study.criteriaText == "\n  Inclusion Criteria:\n  - Age > 18\n");
}

TEST_CASE("missing eligibility yields empty criteria") {
  const auto study = parseStudy(minimalStudy("<condition>Asthma</condition>"));
  CHECK(study.criteriaText.empty());
  CHECK(study.interventions.empty());
}

TEST_CASE("condition and intervention lists follow document order") {
  // Independent DOM walk over the same fixture with Boost.PropertyTree.
  const auto path = kFixtures / "registry" / "NCT00000104.xml";
  boost::property_tree::ptree tree;
  boost::property_tree::read_xml(path.string(), tree);
  std::vector<std::string> conditions, interventions;
  for (const auto& [tag, node] : tree.get_child("clinical_study")) {
    if (tag == "condition") {
      conditions.push_back(node.get_value<std::string>());
    } else if (tag == "intervention") {
      interventions.push_back(node.get<std::string>("intervention_name"));
    }
  }
  REQUIRE(conditions.size() == 3);
  REQUIRE(interventions.size() == 2);

  const auto study = parseStudy(readFile(path));
  CHECK(study.conditions == conditions);
  CHECK(study.interventions == interventions);
  CHECK(study.criteriaText ==
        tree.get<std::string>("clinical_study.eligibility.criteria.textblock"));
}

TEST_CASE("CDATA criteria are kept verbatim") {
  const auto study = parseStudy(readFile(kFixtures / "registry" / "NCT00000106.xml"));
  CHECK(study.criteriaText.find("V600E; exon 15 confirmed") != std::string::npos);
}

TEST_CASE("malformed XML reports a byte offset") {
  const std::string doc = "<clinical_study><id_info></clinical_study>";
  try {
    parseStudy(doc);
    FAIL("expected a parse error");
  } catch (const XmlParseError& e) {
    CHECK(e.offset() > 0);
    CHECK(e.offset() <= doc.size());
    CHECK(std::string(e.what()).find("byte") != std::string::npos);
  }
  CHECK_THROWS_AS(parseStudy("<clinical_study><condition>x</condition>"), XmlParseError);
}

TEST_CASE("schema errors for missing or invalid study ids") {
  CHECK_THROWS_AS(parseStudy("<clinical_study><condition>x</condition></clinical_study>"),
                  SchemaError);
  CHECK_THROWS_AS(parseStudy("<clinical_study><id_info><nct_id>NCT123</nct_id></id_info>"
                             "</clinical_study>"),
                  SchemaError);
  CHECK_THROWS_AS(parseStudy("<other/>"), SchemaError);
  CHECK(isValidStudyId("NCT00000102"));
  CHECK_FALSE(isValidStudyId("NCT0000010A"));
}

TEST_CASE("filter_oncology keyword matching") {
  auto withConditions = [](std::vector<std::string> c) {
    RawStudy s;
    s.studyId = "NCT00000001";
    s.conditions = std::move(c);
    return s;
  };
  CHECK(filterOncology(withConditions({"Breast Neoplasms"})));
  CHECK(filterOncology(withConditions({"Glioblastoma Multiforme"})));
  CHECK_FALSE(filterOncology(withConditions({"Chronic Heart Failure"})));
  CHECK_FALSE(filterOncology(withConditions({})));
  CHECK(filterOncology(withConditions({"Asthma", "Solid TUMOR"})));

  SUBCASE("case variants agree") {
    for (std::string s : {"breast cancer", "BREAST CANCER", "Breast Cancer"}) {
      CHECK(filterOncology(withConditions({s})));
    }
  }
  SUBCASE("substring mode accepts the documented false positive") {
    CHECK(filterOncology(withConditions({"Stomach Ulcer"})));
    CHECK_FALSE(filterOncology(withConditions({"Stomach Ulcer"}), OncologyMatch::StrictToken));
    CHECK(filterOncology(withConditions({"Non-Hodgkin Lymphomas"}), OncologyMatch::StrictToken));
    CHECK(filterOncology(withConditions({"Tumors"}), OncologyMatch::StrictToken));
  }
}

TEST_CASE("ingest_registry over the fixture directory") {
  std::vector<std::string> ids;
  IngestOptions options;
  const auto summary = ingestRegistry(kFixtures / "registry", options,
                                      [&](RawStudy&& s) { ids.push_back(s.studyId); });
  CHECK(summary.parsed == 10);
  CHECK(summary.filteredOut == 3);
  CHECK(summary.failed == 0);
  CHECK(ids == std::vector<std::string>{"NCT00000101", "NCT00000102", "NCT00000104",
                                        "NCT00000106", "NCT00000108", "NCT00000109",
                                        "NCT00000110"});

  SUBCASE("worker count does not change the order") {
    std::vector<std::string> parallel;
    options.threads = 3;
    ingestRegistry(kFixtures / "registry", options,
                   [&](RawStudy&& s) { parallel.push_back(s.studyId); });
    CHECK(parallel == ids);
  }
}

TEST_CASE("corrupt files are counted, not fatal") {
  std::size_t yielded = 0;
  IngestOptions options;
  options.logFailures = false;
  const auto summary = ingestRegistry(kFixtures / "registry_corrupt", options,
                                      [&](RawStudy&&) { ++yielded; });
  CHECK(summary.failed == 1);
  CHECK(summary.parsed == 4);
  CHECK(summary.parsed + summary.failed == 5);
  CHECK(yielded == 3);
  CHECK(yielded <= summary.parsed);
}

TEST_CASE("empty directory and missing source") {
  const auto dir = fs::temp_directory_path() / "ctelig_empty_registry";
  fs::create_directories(dir);
  std::size_t yielded = 0;
  const auto summary = ingestRegistry(dir, {}, [&](RawStudy&&) { ++yielded; });
  CHECK(yielded == 0);
  CHECK(summary.parsed == 0);
  CHECK(summary.filteredOut == 0);
  CHECK(summary.failed == 0);
  CHECK_THROWS_AS(ingestRegistry(dir / "nope", {}, [](RawStudy&&) {}), IoError);
}

TEST_CASE("studies round-trip through JSON lines") {
  RawStudy s{"NCT00000001", {"A", "B"}, {"C"}, "line1\n\tline2 \"quoted\""};
  std::stringstream buf;
  writeStudyJsonl(buf, s);
  const auto back = readStudiesJsonl(buf);
  REQUIRE(back.size() == 1);
  CHECK(back[0] == s);
  std::stringstream bad("{not json}\n");
  CHECK_THROWS_AS(readStudiesJsonl(bad, "bad.jsonl"), FormatError);
}
