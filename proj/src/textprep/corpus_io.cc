#include "ctelig/textprep/corpus_io.h"

#include <filesystem>
#include <fstream>

#include "ctelig/common/errors.h"
#include "ctelig/common/files.h"

namespace ctelig::textprep {

namespace {

constexpr std::string_view kEligibleTag = "__label__1 ";
constexpr std::string_view kNotEligibleTag = "__label__0 ";

std::string cleanField(const std::string& s) {
  std::string out = s;
  for (char& c : out) {
    if (c == '\t' || c == '\n' || c == '\r') {
      c = ' ';
    }
  }
  return out;
}

}  // namespace

void writeCorpus(std::ostream& out, const Dataset& dataset) {
  for (const auto& s : dataset) {
    out << (s.label == Label::Eligible ? kEligibleTag : kNotEligibleTag)
        << s.text << '\n';
  }
}

void writeSidecar(std::ostream& out, const Dataset& dataset) {
  out << "study_id\tcondition\tintervention\n";
  for (const auto& s : dataset) {
    out << cleanField(s.studyId) << '\t' << cleanField(s.condition) << '\t'
        << cleanField(s.intervention) << '\n';
  }
}

Dataset readCorpus(std::istream& in, const std::string& name,
                   std::istream* sidecar) {
  std::vector<LabeledStatement> statements;
  std::string line;
  std::size_t lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.empty()) {
      continue;
    }
    LabeledStatement s;
    const std::string_view view(line);
    if (view.substr(0, kEligibleTag.size()) == kEligibleTag) {
      s.label = Label::Eligible;
    } else if (view.substr(0, kNotEligibleTag.size()) == kNotEligibleTag) {
      s.label = Label::NotEligible;
    } else {
      throw FormatError(name, lineNo,
                        "expected '__label__1 ' or '__label__0 ' prefix");
    }
    s.text = line.substr(kEligibleTag.size());
    if (s.text.empty()) {
      throw FormatError(name, lineNo, "empty statement text");
    }
    statements.push_back(std::move(s));
  }

  if (sidecar != nullptr) {
    std::size_t row = 0;
    std::size_t sideLine = 0;
    bool header = true;
    while (std::getline(*sidecar, line)) {
      ++sideLine;
      if (header) {
        header = false;
        continue;
      }
      if (row >= statements.size()) {
        throw FormatError(name + " (sidecar)", sideLine,
                          "more sidecar rows than statements");
      }
      const auto t1 = line.find('\t');
      const auto t2 =
          t1 == std::string::npos ? std::string::npos : line.find('\t', t1 + 1);
      if (t2 == std::string::npos) {
        throw FormatError(name + " (sidecar)", sideLine,
                          "expected three tab-separated columns");
      }
      auto& s = statements[row++];
      s.studyId = line.substr(0, t1);
      s.condition = line.substr(t1 + 1, t2 - t1 - 1);
      s.intervention = line.substr(t2 + 1);
    }
    if (row != statements.size()) {
      throw FormatError(name + " (sidecar)", 0,
                        "sidecar has " + std::to_string(row) + " rows for " +
                            std::to_string(statements.size()) + " statements");
    }
  }
  return Dataset(std::move(statements));
}

std::string sidecarPath(const std::string& corpusPath) {
  std::filesystem::path p(corpusPath);
  p.replace_extension(".tsv");
  return p.string();
}

Dataset loadCorpus(const std::string& path, bool withSidecar) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot read corpus " + path);
  }
  if (withSidecar) {
    const std::string side = sidecarPath(path);
    if (std::filesystem::exists(side)) {
      std::ifstream sideIn(side);
      return readCorpus(in, path, &sideIn);
    }
  }
  return readCorpus(in, path);
}

void saveCorpus(const std::string& path, const Dataset& dataset,
                bool withSidecar) {
  ensureParentDirectory(path);
  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    throw IoError("cannot write corpus " + path);
  }
  writeCorpus(out, dataset);
  if (withSidecar) {
    std::ofstream side(sidecarPath(path), std::ios::trunc);
    if (!side) {
      throw IoError("cannot write sidecar for " + path);
    }
    writeSidecar(side, dataset);
  }
}

}  // namespace ctelig::textprep
