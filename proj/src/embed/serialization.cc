#include "ctelig/embed/serialization.h"

#include <charconv>
#include <fstream>

#include "ctelig/common/errors.h"
#include "ctelig/common/files.h"
#include "ctelig/common/model_file.h"

namespace ctelig::embed {

namespace {

std::vector<std::string_view> fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) {
      ++pos;
    }
    const auto start = pos;
    while (pos < line.size() && line[pos] != ' ' && line[pos] != '\t') {
      ++pos;
    }
    if (pos > start) {
      out.push_back(line.substr(start, pos - start));
    }
  }
  return out;
}

template <typename T>
bool parseNumber(std::string_view s, T& value) {
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace

void writeVectorsText(std::ostream& out, const EmbeddingModel& model) {
  out << model.vocab().size() << ' ' << model.dim() << '\n';
  char buffer[64];
  std::string line;
  for (std::size_t w = 0; w < model.vocab().size(); ++w) {
    line = model.vocab().word(w);
    for (float x : model.wordVector(w)) {
      const auto res = std::to_chars(buffer, buffer + sizeof(buffer), x);
      line.push_back(' ');
      line.append(buffer, res.ptr);
    }
    line.push_back('\n');
    out << line;
  }
}

EmbeddingModel readVectorsText(std::istream& in, const std::string& name) {
  std::string line;
  if (!std::getline(in, line)) {
    throw FormatError(name, 1, "missing 'V D' header");
  }
  const auto header = fields(line);
  std::size_t vocabSize = 0;
  int dim = 0;
  if (header.size() != 2 || !parseNumber(header[0], vocabSize) ||
      !parseNumber(header[1], dim) || dim <= 0) {
    throw FormatError(name, 1, "header must be '<vocab size> <dimension>'");
  }
  std::vector<std::string> words;
  std::vector<float> values;
  words.reserve(vocabSize);
  values.reserve(vocabSize * static_cast<std::size_t>(dim));
  std::size_t lineNo = 1;
  while (std::getline(in, line)) {
    ++lineNo;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.empty()) {
      continue;
    }
    const auto f = fields(line);
    if (f.size() != static_cast<std::size_t>(dim) + 1) {
      throw FormatError(name, lineNo,
                        "expected a word and " + std::to_string(dim) +
                            " values, found " + std::to_string(f.size() - 1));
    }
    words.emplace_back(f[0]);
    for (std::size_t i = 1; i < f.size(); ++i) {
      float x = 0.0f;
      if (!parseNumber(f[i], x)) {
        throw FormatError(name, lineNo, "bad number '" + std::string(f[i]) + "'");
      }
      values.push_back(x);
    }
  }
  if (words.size() != vocabSize) {
    throw FormatError(name, 1,
                      "header declares " + std::to_string(vocabSize) +
                          " words, file has " + std::to_string(words.size()));
  }
  const auto count = words.size();
  EmbeddingModel model(Vocabulary::fromWords(std::move(words)), dim,
                       Architecture::SkipGram, false, 0, 0, 0);
  model.input() = Matrix(count, static_cast<std::size_t>(dim), std::move(values));
  model.refresh();
  return model;
}

void saveVectorsText(const std::filesystem::path& path, const EmbeddingModel& model) {
  ensureParentDirectory(path);
  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    throw IoError("cannot write " + path.string());
  }
  writeVectorsText(out, model);
}

EmbeddingModel loadVectorsText(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot read " + path.string());
  }
  return readVectorsText(in, path.string());
}

void saveModel(const std::filesystem::path& path, const EmbeddingModel& model) {
  ModelFile file;
  file.header = {{"kind", "embedding"},
                 {"dim", model.dim()},
                 {"architecture", toString(model.architecture())},
                 {"subwords", model.hasSubwords()},
                 {"minn", model.minn()},
                 {"maxn", model.maxn()},
                 {"buckets", model.bucketCount()},
                 {"words", model.vocab().words()}};
  auto blob = [](const Matrix& m) {
    return Blob{{m.rows(), m.cols()}, m.data()};
  };
  file.blobs["input"] = blob(model.input());
  file.blobs["output"] = blob(model.output());
  if (model.hasSubwords()) {
    file.blobs["buckets"] = blob(model.buckets());
  }
  writeModelFile(path, file);
}

EmbeddingModel loadModel(const std::filesystem::path& path) {
  const auto file = readModelFile(path);
  try {
    if (file.header.at("kind") != "embedding") {
      throw FormatError(path.string(), 2, "not an embedding model");
    }
    const int dim = file.header.at("dim").get<int>();
    const auto arch = file.header.at("architecture").get<std::string>() == "cbow"
                          ? Architecture::Cbow
                          : Architecture::SkipGram;
    const bool subwords = file.header.at("subwords").get<bool>();
    auto words = file.header.at("words").get<std::vector<std::string>>();
    const auto count = words.size();
    EmbeddingModel model(Vocabulary::fromWords(std::move(words)), dim, arch,
                         subwords, file.header.at("minn").get<int>(),
                         file.header.at("maxn").get<int>(),
                         file.header.at("buckets").get<std::int64_t>());
    auto load = [&](const std::string& name, Matrix& target, std::size_t rows) {
      const auto& b = file.blob(name);
      if (b.shape.size() != 2 || b.shape[0] != rows ||
          b.shape[1] != static_cast<std::uint64_t>(dim)) {
        throw FormatError(path.string(), 2, "array '" + name + "' has the wrong shape");
      }
      target = Matrix(rows, static_cast<std::size_t>(dim), b.floats());
    };
    load("input", model.input(), count);
    load("output", model.output(), count);
    if (subwords) {
      load("buckets", model.buckets(), static_cast<std::size_t>(model.bucketCount()));
    }
    model.refresh();
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path.string(), 2, e.what());
  }
}

EmbeddingModel loadEmbeddings(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot read " + path.string());
  }
  std::string first;
  std::getline(in, first);
  if (first.rfind("ctelig-model", 0) == 0) {
    return loadModel(path);
  }
  return loadVectorsText(path);
}

}  // namespace ctelig::embed
