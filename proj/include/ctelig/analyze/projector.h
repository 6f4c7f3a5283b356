#pragma once

#include <filesystem>
#include <span>
#include <string>

#include "ctelig/embed/embedding.h"

namespace ctelig::analyze {

struct ProjectorFiles {
  std::filesystem::path vectors;
  std::filesystem::path metadata;
  std::size_t rows = 0;
};

// Writes vectors.tsv (tab-separated floats, one row per word, printed with
// enough digits to round-trip) and metadata.tsv (header "word", then one word
// per row) into outDir. An empty word list exports the whole vocabulary.
// Throws DataError for a word outside the vocabulary, IoError on failure.
ProjectorFiles exportProjector(const embed::EmbeddingModel& model,
                               std::span<const std::string> words,
                               const std::filesystem::path& outDir);

}  // namespace ctelig::analyze
