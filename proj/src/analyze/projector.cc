#include "ctelig/analyze/projector.h"

#include <charconv>
#include <string>

#include "ctelig/common/errors.h"
#include "ctelig/common/files.h"

namespace ctelig::analyze {

ProjectorFiles exportProjector(const embed::EmbeddingModel& model,
                               std::span<const std::string> words,
                               const std::filesystem::path& outDir) {
  std::vector<std::size_t> indices;
  if (words.empty()) {
    for (std::size_t i = 0; i < model.vocab().size(); ++i) {
      indices.push_back(i);
    }
  } else {
    for (const auto& w : words) {
      const auto i = model.vocab().find(w);
      if (i < 0) {
        throw DataError("cannot export '" + w + "': not in the vocabulary");
      }
      indices.push_back(static_cast<std::size_t>(i));
    }
  }
  std::string vectors;
  std::string metadata = "word\n";
  char buf[32];
  for (auto i : indices) {
    const auto v = model.wordVector(i);
    for (std::size_t c = 0; c < v.size(); ++c) {
      if (c > 0) {
        vectors += '\t';
      }
      // Shortest representation that parses back to the same float.
      auto res = std::to_chars(buf, buf + sizeof buf, v[c]);
      vectors.append(buf, res.ptr);
    }
    vectors += '\n';
    metadata += model.vocab().word(i);
    metadata += '\n';
  }
  ProjectorFiles files;
  files.vectors = outDir / "vectors.tsv";
  files.metadata = outDir / "metadata.tsv";
  files.rows = indices.size();
  ensureParentDirectory(files.vectors);
  writeFile(files.vectors, vectors);
  writeFile(files.metadata, metadata);
  return files;
}

}  // namespace ctelig::analyze
