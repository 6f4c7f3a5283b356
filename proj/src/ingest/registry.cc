#include "ctelig/ingest/registry.h"

#include <algorithm>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <thread>

#include "ctelig/common/files.h"

namespace ctelig::ingest {

namespace fs = std::filesystem;

namespace {

bool isStudyFile(const fs::path& p) {
  const std::string name = p.filename().string();
  auto endsWith = [&](std::string_view suffix) {
    return name.size() >= suffix.size() &&
           name.compare(name.size() - suffix.size(), suffix.size(),
                        suffix) == 0;
  };
  return endsWith(".xml") || endsWith(".xml.gz");
}

struct FileResult {
  std::optional<RawStudy> study;
  std::string error;
};

FileResult parseFile(const fs::path& file) {
  FileResult result;
  try {
    result.study = parseStudy(readFile(file));
  } catch (const std::exception& e) {
    result.error = e.what();
  }
  return result;
}

}  // namespace

std::vector<fs::path> listStudyFiles(const fs::path& source) {
  std::error_code ec;
  const auto status = fs::status(source, ec);
  if (ec || !fs::exists(status)) {
    throw IoError("registry source not found: " + source.string());
  }
  std::vector<fs::path> files;
  if (fs::is_regular_file(status)) {
    files.push_back(source);
    return files;
  }
  fs::recursive_directory_iterator it(source, ec), end;
  if (ec) {
    throw IoError("cannot list " + source.string() + ": " + ec.message());
  }
  for (; it != end; it.increment(ec)) {
    if (ec) {
      throw IoError("cannot list " + source.string() + ": " + ec.message());
    }
    if (it->is_regular_file() && isStudyFile(it->path())) {
      files.push_back(it->path());
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

IngestSummary ingestRegistry(const fs::path& source,
                             const IngestOptions& options,
                             const StudySink& sink) {
  const auto files = listStudyFiles(source);
  IngestSummary summary;
  std::vector<RawStudy> held;  // only used when sorting by id

  const unsigned workers = std::max(1u, options.threads);
  const std::size_t batch = 256 * workers;
  std::vector<FileResult> results;
  for (std::size_t start = 0; start < files.size(); start += batch) {
    const std::size_t stop = std::min(files.size(), start + batch);
    results.assign(stop - start, FileResult{});
    if (workers == 1) {
      for (std::size_t i = start; i < stop; ++i) {
        results[i - start] = parseFile(files[i]);
      }
    } else {
      std::vector<std::thread> pool;
      for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
          for (std::size_t i = start + w; i < stop; i += workers) {
            results[i - start] = parseFile(files[i]);
          }
        });
      }
      for (auto& t : pool) {
        t.join();
      }
    }
    // Results are consumed in listing order whatever the worker count.
    for (std::size_t i = start; i < stop; ++i) {
      auto& r = results[i - start];
      if (!r.study) {
        ++summary.failed;
        summary.failures.push_back({files[i], r.error});
        if (options.logFailures) {
          std::cerr << "warning: skipping " << files[i].string() << ": "
                    << r.error << "\n";
        }
        continue;
      }
      ++summary.parsed;
      if (!filterOncology(*r.study, options.match)) {
        ++summary.filteredOut;
        continue;
      }
      if (options.sortByStudyId) {
        held.push_back(std::move(*r.study));
      } else {
        sink(std::move(*r.study));
      }
    }
  }
  if (options.sortByStudyId) {
    std::stable_sort(held.begin(), held.end(),
                     [](const RawStudy& a, const RawStudy& b) {
                       return a.studyId < b.studyId;
                     });
    for (auto& s : held) {
      sink(std::move(s));
    }
  }
  return summary;
}

void writeStudyJsonl(std::ostream& out, const RawStudy& study) {
  nlohmann::json j = {{"study_id", study.studyId},
                      {"conditions", study.conditions},
                      {"interventions", study.interventions},
                      {"criteria", study.criteriaText}};
  out << j.dump() << "\n";
}

std::vector<RawStudy> readStudiesJsonl(std::istream& in,
                                       const std::string& name) {
  std::vector<RawStudy> studies;
  std::string line;
  std::size_t lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    if (line.empty()) {
      continue;
    }
    try {
      const auto j = nlohmann::json::parse(line);
      RawStudy s;
      s.studyId = j.at("study_id").get<std::string>();
      s.conditions = j.at("conditions").get<std::vector<std::string>>();
      s.interventions = j.at("interventions").get<std::vector<std::string>>();
      s.criteriaText = j.at("criteria").get<std::string>();
      studies.push_back(std::move(s));
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(name, lineNo, e.what());
    }
  }
  return studies;
}

}  // namespace ctelig::ingest
