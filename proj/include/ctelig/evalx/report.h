#pragma once

#include <filesystem>
#include <json.hpp>
#include <ostream>
#include <string>
#include <vector>

#include "ctelig/evalx/crossval.h"

namespace ctelig::evalx {

nlohmann::json toJson(const ConfusionMatrix& cm);
nlohmann::json toJson(const EvaluationReport& report);
nlohmann::json toJson(const std::vector<CurvePoint>& curve);

// Aligned-column summary for people.
void writeText(std::ostream& out, const EvaluationReport& report);

// "size<TAB>train_f1<TAB>val_f1<TAB>std" with a header row.
void writeCurveTsv(std::ostream& out, const std::vector<CurvePoint>& curve);

// Clinically phrased statements with expected answers.
struct SimulationCase {
  Label expected = Label::Eligible;
  std::string statement;   // as written
  std::string normalized;  // after the text pipeline
};

// TSV rows "expected<TAB>statement"; expected is Yes/No, Eligible/NotEligible
// or 1/0. '#' lines and blank lines are skipped. Throws FormatError for a
// row without a recognizable expected answer and DataError when the file has
// no cases.
std::vector<SimulationCase> readSimulationSet(const std::filesystem::path& path);

struct SimulationResult {
  EvaluationReport report;
  std::vector<Label> predicted;
};

SimulationResult clinicalSimulation(const Predictor& predictor,
                                    const std::vector<SimulationCase>& cases);

}  // namespace ctelig::evalx
