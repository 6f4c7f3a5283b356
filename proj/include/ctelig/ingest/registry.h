#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "ctelig/ingest/study.h"

namespace ctelig::ingest {

struct IngestFailure {
  std::filesystem::path file;
  std::string message;
};

// parsed + failed equals the number of study files seen.
struct IngestSummary {
  std::size_t parsed = 0;
  std::size_t filteredOut = 0;
  std::size_t failed = 0;
  std::vector<IngestFailure> failures;
};

struct IngestOptions {
  OncologyMatch match = OncologyMatch::Substring;
  unsigned threads = 1;
  // Emit in study-id order instead of file-listing order.
  bool sortByStudyId = false;
  bool logFailures = true;
};

// Sorted list of *.xml / *.xml.gz files under a directory (recursive), or the
// file itself when source is a regular file.
std::vector<std::filesystem::path> listStudyFiles(
    const std::filesystem::path& source);

using StudySink = std::function<void(RawStudy&&)>;

// Parses every study file and hands oncology studies to sink. Per-file
// failures are counted and never abort the run.
IngestSummary ingestRegistry(const std::filesystem::path& source,
                             const IngestOptions& options,
                             const StudySink& sink);

void writeStudyJsonl(std::ostream& out, const RawStudy& study);
std::vector<RawStudy> readStudiesJsonl(std::istream& in,
                                       const std::string& name = "<stream>");

}  // namespace ctelig::ingest
