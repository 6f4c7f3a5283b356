#pragma once

#include <filesystem>
#include <istream>
#include <ostream>
#include <string>

#include "ctelig/embed/embedding.h"

namespace ctelig::embed {

// Word-vector text format: a "V D" header line, then "word v1 ... vD" per
// line. Values are written in shortest round-trip form, so reloading yields
// bit-identical floats. Loading gives a plain (no subword) model.
void writeVectorsText(std::ostream& out, const EmbeddingModel& model);
EmbeddingModel readVectorsText(std::istream& in, const std::string& name);

void saveVectorsText(const std::filesystem::path& path, const EmbeddingModel& model);
EmbeddingModel loadVectorsText(const std::filesystem::path& path);

// Full model (input, output and bucket matrices) in the binary model format.
void saveModel(const std::filesystem::path& path, const EmbeddingModel& model);
EmbeddingModel loadModel(const std::filesystem::path& path);

// Loads either format, chosen by content.
EmbeddingModel loadEmbeddings(const std::filesystem::path& path);

}  // namespace ctelig::embed
