#pragma once

#include <istream>
#include <ostream>
#include <string>

#include "ctelig/textprep/dataset.h"

namespace ctelig::textprep {

// Labeled corpus: one statement per line, "__label__1 <text>" for Eligible
// and "__label__0 <text>" for NotEligible.
void writeCorpus(std::ostream& out, const Dataset& dataset);

// Provenance sidecar, row-aligned with the corpus:
// header "study_id\tcondition\tintervention", then one row per statement.
void writeSidecar(std::ostream& out, const Dataset& dataset);

// Reads a corpus; when sidecar is non-null its rows fill in provenance.
// Throws FormatError naming the offending line.
Dataset readCorpus(std::istream& in, const std::string& name,
                   std::istream* sidecar = nullptr);

Dataset loadCorpus(const std::string& path, bool withSidecar = true);
void saveCorpus(const std::string& path, const Dataset& dataset,
                bool withSidecar = true);

// "foo/corpus.txt" -> "foo/corpus.tsv"
std::string sidecarPath(const std::string& corpusPath);

}  // namespace ctelig::textprep
