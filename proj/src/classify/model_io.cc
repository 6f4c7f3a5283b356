#include "ctelig/classify/model_io.h"

#include "ctelig/common/errors.h"
#include "ctelig/common/hashing.h"
#include "ctelig/textprep/pipeline.h"

namespace ctelig::classify {

namespace {

constexpr const char* kFormat = "ctelig-classifier";

const EmbeddingSource& requireEmbeddings(const TrainOptions& options) {
  if (!options.embeddings || !options.embeddings->model) {
    throw ConfigError(std::string(toString(options.kind)) +
                      " classifier needs word embeddings (run train-embeddings first)");
  }
  return *options.embeddings;
}

}  // namespace

std::unique_ptr<Classifier> trainClassifier(const Dataset& dataset, const TrainOptions& options) {
  const embed::EmbeddingModel* pretrained =
      options.embeddings ? options.embeddings->model.get() : nullptr;
  std::unique_ptr<Classifier> model;
  switch (options.kind) {
    case ModelKind::Linear:
      model = trainLinear(dataset, pretrained, options.linear,
                          deriveSeed(options.seed, "classifier-linear"));
      break;
    case ModelKind::Cnn: {
      auto hyper = options.cnn;
      hyper.threads = options.threads;
      model = trainCnn(dataset, pretrained, hyper, deriveSeed(options.seed, "classifier-cnn"));
      break;
    }
    case ModelKind::Svm:
      model = trainSvm(dataset, requireEmbeddings(options), options.svm);
      break;
    case ModelKind::Knn:
      model = trainKnn(dataset, requireEmbeddings(options), options.knn, options.threads);
      break;
  }
  if (options.embeddings) {
    model->setEmbeddingOrigin(options.embeddings->path, options.embeddings->checksum);
  }
  return model;
}

void saveClassifier(const std::filesystem::path& path, const Classifier& classifier) {
  ModelFile file;
  file.header["format"] = kFormat;
  file.header["kind"] = toString(classifier.kind());
  file.header["pipeline_version"] = textprep::kPipelineVersion;
  file.header["embedding"] = {{"path", classifier.embeddingPath().string()},
                              {"checksum", classifier.embeddingChecksum()}};
  classifier.store(file);
  writeModelFile(path, file);
}

std::unique_ptr<Classifier> loadClassifier(
    const std::filesystem::path& path,
    const std::optional<std::filesystem::path>& embeddings) {
  const auto file = readModelFile(path);
  const auto& h = file.header;
  if (h.value("format", "") != kFormat) {
    throw DataError(path.string() + " is not a classifier model file");
  }
  if (h.value("pipeline_version", "") != textprep::kPipelineVersion) {
    throw DataError(path.string() + " was built with text pipeline '" +
                    h.value("pipeline_version", "") + "' but this build uses '" +
                    textprep::kPipelineVersion + "'; retrain the model");
  }
  const auto kind = parseModelKind(h.at("kind").get<std::string>());
  const auto recordedPath = h.at("embedding").at("path").get<std::string>();
  const auto recordedChecksum = h.at("embedding").at("checksum").get<std::string>();

  std::unique_ptr<Classifier> model;
  if (kind == ModelKind::Linear) {
    model = LinearAvgModel::restore(file);
  } else if (kind == ModelKind::Cnn) {
    model = CnnModel::restore(file);
  } else {
    const std::filesystem::path source = embeddings ? *embeddings : std::filesystem::path(recordedPath);
    if (source.empty()) {
      throw ConfigError(path.string() +
                        " does not record its embedding file; pass the embeddings explicitly");
    }
    auto loaded = EmbeddingSource::load(source);
    if (!recordedChecksum.empty() && loaded.checksum != recordedChecksum) {
      throw DataError("embedding file " + source.string() + " has checksum " + loaded.checksum +
                      " but the model was trained with " + recordedChecksum);
    }
    if (kind == ModelKind::Svm) {
      model = SvmModel::restore(file, std::move(loaded));
    } else {
      model = KnnModel::restore(file, std::move(loaded));
    }
  }
  model->setEmbeddingOrigin(recordedPath, recordedChecksum);
  return model;
}

}  // namespace ctelig::classify
