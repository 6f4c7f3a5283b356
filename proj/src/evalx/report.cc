#include "ctelig/evalx/report.h"

#include <iomanip>
#include <sstream>

#include "ctelig/common/errors.h"
#include "ctelig/common/files.h"
#include "ctelig/textprep/normalize.h"

namespace ctelig::evalx {

using nlohmann::json;

namespace {

json toJson(const Metrics& m) {
  json j = {{"precision", m.precision},
            {"recall", m.recall},
            {"f1", m.f1},
            {"accuracy", m.accuracy}};
  json undefined = json::array();
  if (m.precisionUndefined) undefined.push_back("precision");
  if (m.recallUndefined) undefined.push_back("recall");
  if (m.f1Undefined) undefined.push_back("f1");
  if (m.accuracyUndefined) undefined.push_back("accuracy");
  if (!undefined.empty()) {
    j["undefined"] = undefined;
  }
  return j;
}

json toJson(const Summary& s) {
  return {{"mean", s.mean}, {"std", s.stddev}};
}

std::string fixed(double v, int digits = 4) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) {
    return {};
  }
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool parseExpected(std::string token, Label& out) {
  for (auto& ch : token) {
    ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  }
  if (token == "yes" || token == "eligible" || token == "1") {
    out = Label::Eligible;
    return true;
  }
  if (token == "no" || token == "noteligible" || token == "not eligible" ||
      token == "0") {
    out = Label::NotEligible;
    return true;
  }
  return false;
}

}  // namespace

json toJson(const ConfusionMatrix& cm) {
  return {{"tp", cm.tp}, {"fp", cm.fp}, {"fn", cm.fn}, {"tn", cm.tn}};
}

json toJson(const EvaluationReport& report) {
  json folds = json::array();
  for (const auto& f : report.folds) {
    folds.push_back({{"size", f.size},
                     {"confusion", toJson(f.validation)},
                     {"metrics", toJson(f.metrics)},
                     {"kappa", f.kappa.value},
                     {"kappa_degenerate", f.kappa.degenerate},
                     {"train_f1", f.trainF1}});
  }
  return {{"confusion", toJson(report.confusion)},
          {"metrics", toJson(report.metrics)},
          {"kappa", report.kappa.value},
          {"kappa_degenerate", report.kappa.degenerate},
          {"folds", folds},
          {"f1", toJson(report.f1)},
          {"accuracy", toJson(report.accuracy)},
          {"kappa_folds", toJson(report.kappaSummary)},
          {"train_f1", toJson(report.trainF1)}};
}

json toJson(const std::vector<CurvePoint>& curve) {
  json out = json::array();
  for (const auto& p : curve) {
    out.push_back({{"size", p.size},
                   {"train_size", p.trainSize},
                   {"train_f1", toJson(p.trainF1)},
                   {"val_f1", toJson(p.validationF1)},
                   {"test_f1", p.testF1}});
  }
  return out;
}

void writeText(std::ostream& out, const EvaluationReport& report) {
  const auto& cm = report.confusion;
  const auto& m = report.metrics;
  out << "confusion    predicted+  predicted-\n"
      << "  actual+  " << std::setw(12) << cm.tp << std::setw(12) << cm.fn
      << "\n"
      << "  actual-  " << std::setw(12) << cm.fp << std::setw(12) << cm.tn
      << "\n\n";
  out << std::left << std::setw(12) << "precision" << fixed(m.precision)
      << "\n"
      << std::setw(12) << "recall" << fixed(m.recall) << "\n"
      << std::setw(12) << "f1" << fixed(m.f1) << "\n"
      << std::setw(12) << "accuracy" << fixed(m.accuracy) << "\n"
      << std::setw(12) << "kappa" << fixed(report.kappa.value)
      << (report.kappa.degenerate ? " (degenerate)" : "") << "\n"
      << std::right;
  if (report.folds.size() > 1) {
    out << "\nfold      size        f1  accuracy     kappa\n";
    for (std::size_t i = 0; i < report.folds.size(); ++i) {
      const auto& f = report.folds[i];
      out << std::setw(4) << i + 1 << std::setw(10) << f.size << std::setw(10)
          << fixed(f.metrics.f1) << std::setw(10) << fixed(f.metrics.accuracy)
          << std::setw(10) << fixed(f.kappa.value) << "\n";
    }
    out << "mean f1 " << fixed(report.f1.mean) << " +/- "
        << fixed(report.f1.stddev) << "\n";
  }
}

void writeCurveTsv(std::ostream& out, const std::vector<CurvePoint>& curve) {
  out << "size\ttrain_f1\tval_f1\tstd\n";
  for (const auto& p : curve) {
    out << p.size << '\t' << fixed(p.trainF1.mean, 6) << '\t'
        << fixed(p.validationF1.mean, 6) << '\t'
        << fixed(p.validationF1.stddev, 6) << '\n';
  }
}

std::vector<SimulationCase> readSimulationSet(const std::filesystem::path& path) {
  std::istringstream in(readFile(path));
  std::vector<SimulationCase> cases;
  std::string line;
  std::size_t lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') {
      continue;
    }
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw FormatError(path.string(), lineNo,
                        "expected 'answer<TAB>statement'");
    }
    SimulationCase c;
    if (!parseExpected(trim(line.substr(0, tab)), c.expected)) {
      throw FormatError(path.string(), lineNo,
                        "missing gold answer (Yes/No, Eligible/NotEligible "
                        "or 1/0)");
    }
    c.statement = trim(line.substr(tab + 1));
    if (c.statement.empty()) {
      throw FormatError(path.string(), lineNo, "empty statement");
    }
    c.normalized = textprep::normalize(c.statement);
    cases.push_back(std::move(c));
  }
  if (cases.empty()) {
    throw DataError("simulation set " + path.string() + " has no cases");
  }
  return cases;
}

SimulationResult clinicalSimulation(const Predictor& predictor,
                                    const std::vector<SimulationCase>& cases) {
  if (cases.empty()) {
    throw DataError("clinical simulation needs at least one case");
  }
  Dataset d;
  for (const auto& c : cases) {
    textprep::LabeledStatement s;
    s.label = c.expected;
    s.text = c.normalized;
    d.add(std::move(s));
  }
  SimulationResult r;
  r.predicted = predictor(d);
  std::vector<Label> truth;
  for (const auto& c : cases) {
    truth.push_back(c.expected);
  }
  FoldScore f;
  f.size = d.size();
  f.validation = confusion(r.predicted, truth);
  f.metrics = metrics(f.validation);
  f.kappa = cohensKappa(f.validation);
  std::vector<FoldScore> folds{f};
  r.report = makeReport(std::move(folds));
  return r;
}

}  // namespace ctelig::evalx
