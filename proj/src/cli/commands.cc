#include "ctelig/cli/commands.h"

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <memory>
#include <optional>
#include <sstream>

#include "ctelig/analyze/kmeans.h"
#include "ctelig/analyze/points.h"
#include "ctelig/analyze/projector.h"
#include "ctelig/analyze/tsne.h"
#include "ctelig/classify/model_io.h"
#include "ctelig/cli/config.h"
#include "ctelig/cli/manifest.h"
#include "ctelig/common/errors.h"
#include "ctelig/common/files.h"
#include "ctelig/common/random.h"
#include "ctelig/embed/search.h"
#include "ctelig/embed/serialization.h"
#include "ctelig/embed/trainer.h"
#include "ctelig/evalx/crossval.h"
#include "ctelig/evalx/report.h"
#include "ctelig/ingest/registry.h"
#include "ctelig/phrases/phrases.h"
#include "ctelig/textprep/corpus_io.h"
#include "ctelig/textprep/normalize.h"
#include "ctelig/textprep/pipeline.h"

namespace ctelig::cli {

using classify::ModelKind;
using textprep::Dataset;
using textprep::Label;

Artifacts::Artifacts(const fs::path& workDir)
    : studies(workDir / "studies.jsonl"),
      corpus(workDir / "corpus.txt"),
      phrases(workDir / "phrases.tsv"),
      phrasedCorpus(workDir / "corpus_phrased.txt"),
      embeddings(workDir / "embeddings.bin"),
      models(workDir / "models"),
      reports(workDir / "reports"),
      analysis(workDir / "analysis") {}

fs::path Artifacts::model(ModelKind kind) const {
  return models / (std::string(classify::toString(kind)) + ".model");
}

namespace {

// Options shared by every subcommand plus the per-subcommand ones.
struct Options {
  std::string configPath;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  unsigned threads = 0;
  std::string workDir;

  std::string source;
  std::string model;
  std::string embeddings;
  std::string simulation;
  bool crossValidate = false;
  std::string sizes;
  std::string wordsFile;
  std::string outDir;
  std::string metric = "cosine";
  std::size_t k = 0;
  std::size_t top = 0;
  std::vector<std::string> words;
};

struct Context {
  PipelineConfig config;
  Artifacts artifacts;
  Options options;
  std::vector<std::string> arguments;
  Streams io;

  unsigned threads() const { return config.run.threads; }
  std::uint64_t seed(const std::string& stream) const {
    return deriveSeed(config.run.seed, stream);
  }
  RunManifest manifest(const std::string& subcommand) const {
    return RunManifest(subcommand, arguments, config);
  }
};

void require(const fs::path& path, const std::string& producer) {
  if (!fs::exists(path)) {
    throw DataError("missing " + path.generic_string() + "; run `ctelig " + producer +
                    "` first");
  }
}

std::vector<std::string> readWordList(const fs::path& path) {
  std::istringstream in(readFile(path));
  std::vector<std::string> words;
  for (std::string line; std::getline(in, line);) {
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    const auto e = line.find_last_not_of(" \t\r");
    words.push_back(line.substr(b, e - b + 1));
  }
  if (words.empty()) {
    throw DataError("word list " + path.string() + " is empty");
  }
  return words;
}

std::vector<std::string> textsOf(const Dataset& d) {
  std::vector<std::string> texts;
  texts.reserve(d.size());
  for (const auto& s : d) texts.push_back(s.text);
  return texts;
}

std::string describe(const Dataset& d) {
  return std::to_string(d.size()) + " statements (eligible " +
         std::to_string(d.count(Label::Eligible)) + ", not eligible " +
         std::to_string(d.count(Label::NotEligible)) + ")";
}

// The corpus classifiers and embeddings train on.
fs::path trainingCorpusPath(const Context& ctx) {
  if (ctx.config.phrases.enabled) {
    require(ctx.artifacts.phrasedCorpus, "phrases");
    return ctx.artifacts.phrasedCorpus;
  }
  require(ctx.artifacts.corpus, "preprocess");
  return ctx.artifacts.corpus;
}

// Balanced, optionally capped corpus: the population every classifier
// command works from.
Dataset balancedCorpus(const Context& ctx, RunManifest& manifest) {
  const fs::path path = trainingCorpusPath(ctx);
  manifest.input(path);
  Dataset balanced =
      textprep::balance(textprep::loadCorpus(path.string()), ctx.seed("balance"));
  const std::size_t cap = ctx.config.dataset.maxSamples;
  if (cap > 0 && cap < balanced.size()) {
    balanced = evalx::balancedSubsample(balanced, cap, ctx.seed("max-samples"));
  }
  return balanced;
}

std::pair<Dataset, Dataset> trainTestSplit(const Context& ctx, RunManifest& manifest) {
  return textprep::splitTrainTest(balancedCorpus(ctx, manifest),
                                  ctx.config.dataset.testFraction, ctx.seed("split"));
}

bool needsEmbeddings(const Context& ctx, ModelKind kind) {
  switch (kind) {
    case ModelKind::Linear:
      return ctx.config.classify.linearPretrained;
    case ModelKind::Cnn:
      return ctx.config.classify.cnnPretrained;
    default:
      return true;
  }
}

classify::TrainOptions trainOptions(const Context& ctx, ModelKind kind,
                                    RunManifest& manifest) {
  classify::TrainOptions o;
  o.kind = kind;
  o.linear = ctx.config.classify.linear;
  o.cnn = ctx.config.classify.cnn;
  o.cnn.threads = ctx.threads();
  o.svm = ctx.config.classify.svm;
  o.knn = ctx.config.classify.knn;
  o.seed = ctx.seed("train-classifier");
  o.threads = ctx.threads();
  if (needsEmbeddings(ctx, kind)) {
    const fs::path path = ctx.options.embeddings.empty() ? ctx.artifacts.embeddings
                                                         : fs::path(ctx.options.embeddings);
    require(path, "train-embeddings");
    manifest.input(path);
    o.embeddings = classify::EmbeddingSource::load(path);
  }
  return o;
}

evalx::Trainer makeTrainer(classify::TrainOptions options) {
  return [options](const Dataset& train, std::uint64_t seed) -> evalx::Predictor {
    auto o = options;
    o.seed = seed;
    std::shared_ptr<const classify::Classifier> model = classify::trainClassifier(train, o);
    const unsigned threads = o.threads;
    return [model, threads](const Dataset& d) { return model->predictLabels(d, threads); };
  };
}

// Raw clinical text to model input: the corpus normalization plus phrase
// joining when the corpus was phrased.
std::function<std::string(std::string_view)> inputPreparer(const Context& ctx,
                                                           RunManifest& manifest) {
  const auto normalizeOptions = ctx.config.preprocess.augment.normalize;
  if (!ctx.config.phrases.enabled) {
    return [normalizeOptions](std::string_view raw) {
      return textprep::normalize(raw, normalizeOptions);
    };
  }
  require(ctx.artifacts.phrases, "phrases");
  manifest.input(ctx.artifacts.phrases);
  std::istringstream in(readFile(ctx.artifacts.phrases));
  auto table = std::make_shared<phrases::PhraseTable>(
      phrases::readTsv(in, ctx.artifacts.phrases.string()));
  return [normalizeOptions, table](std::string_view raw) {
    return phrases::applyPhrases(textprep::normalize(raw, normalizeOptions), *table);
  };
}

// "--model" accepts a model kind (meaning its default path) or a file.
fs::path modelPath(const Context& ctx) {
  const std::string& m = ctx.options.model;
  if (m == "linear" || m == "cnn" || m == "svm" || m == "knn") {
    const fs::path path = ctx.artifacts.model(classify::parseModelKind(m));
    require(path, "train-classifier --model " + m);
    return path;
  }
  if (!fs::exists(m)) {
    throw DataError("model file " + m + " does not exist; run `ctelig train-classifier` first");
  }
  return m;
}

std::unique_ptr<classify::Classifier> loadModel(const Context& ctx, RunManifest& manifest) {
  const fs::path path = modelPath(ctx);
  manifest.input(path);
  std::optional<fs::path> embeddings;
  if (!ctx.options.embeddings.empty()) {
    embeddings = ctx.options.embeddings;
  }
  auto model = classify::loadClassifier(path, embeddings);
  if (!model->embeddingPath().empty()) {
    manifest.input(embeddings.value_or(model->embeddingPath()));
  }
  return model;
}

std::shared_ptr<const embed::EmbeddingModel> loadEmbeddingModel(const Context& ctx,
                                                                 RunManifest& manifest) {
  const fs::path path = ctx.options.embeddings.empty() ? ctx.artifacts.embeddings
                                                       : fs::path(ctx.options.embeddings);
  require(path, "train-embeddings");
  manifest.input(path);
  return std::make_shared<const embed::EmbeddingModel>(embed::loadEmbeddings(path));
}

void writeOutput(RunManifest& manifest, const fs::path& path, const std::string& content) {
  ensureParentDirectory(path);
  writeFile(path, content);
  manifest.output(path);
}

// --- subcommands -----------------------------------------------------------

void cmdIngest(Context& ctx) {
  auto manifest = ctx.manifest("ingest");
  const fs::path source =
      ctx.options.source.empty() ? ctx.config.paths.registry : fs::path(ctx.options.source);
  if (source.empty()) {
    throw ConfigError("no registry source: set paths.registry or pass --source");
  }
  if (!fs::exists(source)) {
    throw IoError("registry source " + source.string() + " does not exist");
  }
  ingest::IngestOptions options;
  options.match = ctx.config.ingest.match;
  options.sortByStudyId = ctx.config.ingest.sortByStudyId;
  options.threads = ctx.threads();
  options.logFailures = false;
  ensureParentDirectory(ctx.artifacts.studies);
  ingest::IngestSummary summary;
  {
    std::ofstream out(ctx.artifacts.studies, std::ios::trunc);
    if (!out) throw IoError("cannot write " + ctx.artifacts.studies.string());
    summary = ingest::ingestRegistry(source, options, [&](ingest::RawStudy&& s) {
      ingest::writeStudyJsonl(out, s);
    });
  }
  for (const auto& f : summary.failures) {
    ctx.io.err << "warning: skipped " << f.file.generic_string() << ": " << f.message << "\n";
  }
  manifest.output(ctx.artifacts.studies);
  manifest.note("source", source.generic_string());
  manifest.note("parsed", summary.parsed);
  manifest.note("filtered_out", summary.filteredOut);
  manifest.note("failed", summary.failed);
  manifest.write("ingest");
  ctx.io.out << "parsed " << summary.parsed << ", kept " << summary.parsed - summary.filteredOut
             << " oncology studies, failed " << summary.failed << "\n";
}

void cmdPreprocess(Context& ctx) {
  auto manifest = ctx.manifest("preprocess");
  require(ctx.artifacts.studies, "ingest");
  manifest.input(ctx.artifacts.studies);
  std::ifstream in(ctx.artifacts.studies);
  const auto studies = ingest::readStudiesJsonl(in, ctx.artifacts.studies.string());
  Dataset dataset;
  for (const auto& study : studies) {
    for (auto& s : textprep::preprocessStudy(study, ctx.config.preprocess)) {
      dataset.add(std::move(s));
    }
  }
  textprep::saveCorpus(ctx.artifacts.corpus.string(), dataset);
  manifest.output(ctx.artifacts.corpus);
  manifest.output(textprep::sidecarPath(ctx.artifacts.corpus.string()));
  manifest.note("statements", dataset.size());
  manifest.note("eligible", dataset.count(Label::Eligible));
  manifest.note("not_eligible", dataset.count(Label::NotEligible));
  manifest.write("preprocess");
  ctx.io.out << studies.size() << " studies -> " << describe(dataset) << "\n";
}

void cmdPhrases(Context& ctx) {
  if (!ctx.config.phrases.enabled) {
    throw ConfigError("phrase detection is disabled (phrases.enabled = false)");
  }
  auto manifest = ctx.manifest("phrases");
  require(ctx.artifacts.corpus, "preprocess");
  manifest.input(ctx.artifacts.corpus);
  Dataset dataset = textprep::loadCorpus(ctx.artifacts.corpus.string());
  const auto texts = textsOf(dataset);
  const auto table = phrases::detectPhrases(texts, ctx.config.phrases.params);
  std::ostringstream tsv;
  phrases::writeTsv(tsv, table);
  writeOutput(manifest, ctx.artifacts.phrases, tsv.str());

  std::vector<textprep::LabeledStatement> joined(dataset.begin(), dataset.end());
  for (auto& s : joined) {
    s.text = phrases::applyPhrases(s.text, table);
  }
  textprep::saveCorpus(ctx.artifacts.phrasedCorpus.string(), Dataset(std::move(joined)));
  manifest.output(ctx.artifacts.phrasedCorpus);
  manifest.note("phrases", table.size());
  manifest.write("phrases");
  ctx.io.out << table.size() << " phrases detected over " << dataset.size() << " statements\n";
}

void cmdTrainEmbeddings(Context& ctx) {
  auto manifest = ctx.manifest("train-embeddings");
  const fs::path corpus = trainingCorpusPath(ctx);
  manifest.input(corpus);
  const auto texts = textsOf(textprep::loadCorpus(corpus.string(), false));
  auto hyper = ctx.config.embeddings.effective();
  hyper.threads = ctx.threads();
  auto result = embed::trainEmbeddings(texts, hyper, ctx.seed("embeddings"));
  ensureParentDirectory(ctx.artifacts.embeddings);
  embed::saveModel(ctx.artifacts.embeddings, result.model);
  manifest.output(ctx.artifacts.embeddings);
  manifest.note("vocabulary", result.model.vocab().size());
  manifest.note("epoch_loss", result.stats.epochLoss);
  manifest.write("train-embeddings");
  ctx.io.out << "vocabulary " << result.model.vocab().size() << " words, dim "
             << result.model.dim() << "\n";
}

void cmdTrainClassifier(Context& ctx) {
  const ModelKind kind = classify::parseModelKind(ctx.options.model);
  const std::string name = std::string("train-classifier-") + classify::toString(kind);
  auto manifest = ctx.manifest("train-classifier");
  auto [train, test] = trainTestSplit(ctx, manifest);
  auto options = trainOptions(ctx, kind, manifest);
  auto model = classify::trainClassifier(train, options);
  const fs::path out =
      ctx.options.outDir.empty() ? ctx.artifacts.model(kind) : fs::path(ctx.options.outDir);
  ensureParentDirectory(out);
  classify::saveClassifier(out, *model);
  manifest.output(out);
  manifest.note("train_statements", train.size());
  manifest.note("test_statements", test.size());
  manifest.write(name);
  ctx.io.out << "trained " << classify::toString(kind) << " on " << describe(train) << " -> "
             << out.generic_string() << "\n";
}

void cmdEvaluate(Context& ctx) {
  auto manifest = ctx.manifest("evaluate");
  auto model = loadModel(ctx, manifest);
  const ModelKind kind = model->kind();
  const std::string kindName = classify::toString(kind);
  const unsigned threads = ctx.threads();

  nlohmann::json report = {{"model", kindName}};
  std::ostringstream text;

  auto [train, test] = trainTestSplit(ctx, manifest);
  {
    evalx::FoldScore fold;
    fold.size = test.size();
    std::vector<Label> truth;
    for (const auto& s : test) truth.push_back(s.label);
    fold.validation = evalx::confusion(model->predictLabels(test, threads), truth);
    fold.metrics = evalx::metrics(fold.validation);
    fold.kappa = evalx::cohensKappa(fold.validation);
    auto holdout = evalx::makeReport({fold});
    report["holdout"] = evalx::toJson(holdout);
    text << "== held-out split (" << test.size() << " statements)\n";
    evalx::writeText(text, holdout);
  }

  if (ctx.options.crossValidate) {
    Dataset all = train;
    for (const auto& s : test) all.add(s);
    evalx::CvOptions cv;
    cv.k = ctx.config.evaluate.folds;
    auto result = evalx::kfoldCv(all, makeTrainer(trainOptions(ctx, kind, manifest)),
                                 ctx.seed("cross-validation"), cv);
    report["cross_validation"] = evalx::toJson(result);
    text << "\n== " << cv.k << "-fold cross-validation (" << all.size() << " statements)\n";
    evalx::writeText(text, result);
  }

  fs::path simulation = ctx.options.simulation;
  if (simulation.empty() && fs::exists(ctx.config.paths.simulation)) {
    simulation = ctx.config.paths.simulation;
  }
  if (!simulation.empty()) {
    manifest.input(simulation);
    auto cases = evalx::readSimulationSet(simulation);
    auto prepare = inputPreparer(ctx, manifest);
    for (auto& c : cases) c.normalized = prepare(c.statement);
    auto result = evalx::clinicalSimulation(
        [&](const Dataset& d) { return model->predictLabels(d, threads); }, cases);
    auto j = evalx::toJson(result.report);
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < cases.size(); ++i) {
      rows.push_back({{"statement", cases[i].statement},
                      {"expected", textprep::toString(cases[i].expected)},
                      {"predicted", textprep::toString(result.predicted[i])}});
    }
    j["cases"] = rows;
    report["simulation"] = j;
    text << "\n== clinical practice simulation (" << cases.size() << " statements)\n";
    evalx::writeText(text, result.report);
  }

  const fs::path base = ctx.artifacts.reports / ("evaluate-" + kindName);
  writeOutput(manifest, base.string() + ".json", report.dump(2) + "\n");
  writeOutput(manifest, base.string() + ".txt", text.str());
  manifest.write("evaluate-" + kindName);
  ctx.io.out << text.str();
}

void cmdLearningCurve(Context& ctx) {
  const ModelKind kind = classify::parseModelKind(ctx.options.model);
  const std::string kindName = classify::toString(kind);
  auto manifest = ctx.manifest("learning-curve");
  if (!ctx.options.sizes.empty()) {
    ctx.config.set("evaluate", "curve_sizes", ctx.options.sizes);
  }
  Dataset balanced = balancedCorpus(ctx, manifest);
  evalx::CurveOptions options;
  options.k = ctx.config.evaluate.folds;
  options.testFraction = ctx.config.dataset.testFraction;
  auto curve = evalx::learningCurve(balanced, ctx.config.evaluate.curveSizes,
                                    makeTrainer(trainOptions(ctx, kind, manifest)),
                                    ctx.seed("learning-curve"), options);
  std::ostringstream tsv;
  evalx::writeCurveTsv(tsv, curve);
  const fs::path base = ctx.artifacts.reports / ("curve-" + kindName);
  writeOutput(manifest, base.string() + ".tsv", tsv.str());
  writeOutput(manifest, base.string() + ".json", evalx::toJson(curve).dump(2) + "\n");
  manifest.write("learning-curve-" + kindName);
  ctx.io.out << tsv.str();
}

void cmdPredict(Context& ctx) {
  auto manifest = ctx.manifest("predict");
  auto model = loadModel(ctx, manifest);
  auto prepare = inputPreparer(ctx, manifest);
  std::size_t lines = 0;
  for (std::string line; std::getline(ctx.io.in, line);) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string text = prepare(line);
    // Nothing left after normalization: report the undecided default.
    const classify::Prediction p = text.empty() ? classify::Prediction{} : model->predict(text);
    ctx.io.out << textprep::toString(p.label) << '\t' << std::fixed << std::setprecision(6)
               << p.scores[static_cast<int>(p.label)] << '\n';
    ++lines;
  }
  manifest.note("statements", lines);
  manifest.write("predict");
}

embed::Metric parseMetric(const std::string& name) {
  if (name == "cosine") return embed::Metric::Cosine;
  if (name == "euclidean") return embed::Metric::Euclidean;
  throw ConfigError("unknown metric '" + name + "' (expected cosine|euclidean)");
}

void printNeighbors(std::ostream& out, const std::vector<embed::Neighbor>& list) {
  out << std::fixed << std::setprecision(6);
  for (const auto& n : list) out << n.word << '\t' << n.score << '\n';
}

void cmdNeighbors(Context& ctx) {
  auto manifest = ctx.manifest("neighbors");
  auto model = loadEmbeddingModel(ctx, manifest);
  const std::size_t k = ctx.options.k ? ctx.options.k : ctx.config.analyze.neighbors;
  printNeighbors(ctx.io.out, embed::nearest(*model, ctx.options.words.at(0), k,
                                            parseMetric(ctx.options.metric)));
  manifest.write("neighbors");
}

void cmdAnalogy(Context& ctx) {
  auto manifest = ctx.manifest("analogy");
  auto model = loadEmbeddingModel(ctx, manifest);
  const auto& w = ctx.options.words;
  const std::size_t k = ctx.options.k ? ctx.options.k : 10;
  // "P1 N P2" reads P1 - N + P2: N is to P1 as P2 is to the answer.
  printNeighbors(ctx.io.out, embed::analogy3CosMul(*model, w.at(1), w.at(0), w.at(2), k));
  manifest.write("analogy");
}

void cmdCluster(Context& ctx) {
  auto manifest = ctx.manifest("cluster");
  auto model = loadEmbeddingModel(ctx, manifest);
  const std::size_t limit = ctx.options.top ? ctx.options.top : ctx.config.analyze.clusterWords;
  auto points = analyze::vocabularyPoints(*model, limit);
  analyze::KmeansOptions options;
  const std::size_t k = ctx.options.k ? ctx.options.k : ctx.config.analyze.clusters;
  if (k > 0) options.k = k;
  options.maxIterations = ctx.config.analyze.kmeansMaxIterations;
  options.threads = ctx.threads();
  auto result = analyze::kmeans(points.points, options, ctx.seed("kmeans"));
  std::ostringstream tsv;
  analyze::writeClustersTsv(tsv, points.words, result);
  const fs::path out = ctx.artifacts.analysis / "clusters.tsv";
  writeOutput(manifest, out, tsv.str());
  manifest.note("clusters", result.centroids.rows());
  manifest.note("inertia", result.inertia);
  manifest.note("iterations", result.iterations);
  manifest.write("cluster");
  ctx.io.out << points.words.size() << " words in " << result.centroids.rows()
             << " clusters, inertia " << result.inertia << " after " << result.iterations
             << " iterations -> " << out.generic_string() << "\n";
}

analyze::WordPoints chosenPoints(const Context& ctx, const embed::EmbeddingModel& model,
                                 std::size_t defaultTop, RunManifest& manifest) {
  if (!ctx.options.wordsFile.empty()) {
    manifest.input(ctx.options.wordsFile);
    const auto words = readWordList(ctx.options.wordsFile);
    return analyze::selectedPoints(model, words);
  }
  return analyze::vocabularyPoints(model, ctx.options.top ? ctx.options.top : defaultTop);
}

void cmdProject(Context& ctx) {
  auto manifest = ctx.manifest("project");
  auto model = loadEmbeddingModel(ctx, manifest);
  auto points = chosenPoints(ctx, *model, ctx.config.analyze.tsneWords, manifest);
  auto options = ctx.config.analyze.tsne;
  options.threads = ctx.threads();
  auto result = analyze::tsne(points.points, options, ctx.seed("tsne"));
  std::ostringstream tsv;
  analyze::writeTsneTsv(tsv, points.words, result);
  const fs::path out = ctx.artifacts.analysis / "tsne.tsv";
  writeOutput(manifest, out, tsv.str());
  manifest.note("kl", result.kl);
  manifest.write("project");
  ctx.io.out << points.words.size() << " words projected, KL " << result.kl << " -> "
             << out.generic_string() << "\n";
}

void cmdExportProjector(Context& ctx) {
  auto manifest = ctx.manifest("export-projector");
  auto model = loadEmbeddingModel(ctx, manifest);
  std::vector<std::string> words;
  if (!ctx.options.wordsFile.empty()) {
    manifest.input(ctx.options.wordsFile);
    words = readWordList(ctx.options.wordsFile);
  }
  const fs::path dir =
      ctx.options.outDir.empty() ? ctx.artifacts.analysis / "projector" : fs::path(ctx.options.outDir);
  auto files = analyze::exportProjector(*model, words, dir);
  manifest.output(files.vectors);
  manifest.output(files.metadata);
  manifest.write("export-projector");
  ctx.io.out << files.rows << " rows -> " << files.vectors.generic_string() << ", "
             << files.metadata.generic_string() << "\n";
}

PipelineConfig resolveConfig(const Options& o) {
  PipelineConfig config = o.configPath.empty() ? PipelineConfig{} : PipelineConfig::load(o.configPath);
  if (const char* env = std::getenv("CTELIG_THREADS"); env != nullptr && *env != '\0') {
    config.set("run", "threads", env);
  }
  for (const auto& assignment : o.overrides) config.set(assignment);
  if (o.seed) config.run.seed = *o.seed;
  if (o.threads > 0) config.run.threads = o.threads;
  if (!o.workDir.empty()) config.paths.workDir = o.workDir;
  config.validate();
  return config;
}

}  // namespace

int runCli(const std::vector<std::string>& args, Streams io) {
  CLI::App app{"Clinical-trial eligibility classification pipeline", "ctelig"};
  app.require_subcommand(1);
  Options o;
  app.add_option("-c,--config", o.configPath, "INI configuration file");
  app.add_option("--set", o.overrides, "Override a key: section.key=value")->take_all();
  app.add_option("--seed", o.seed, "Global seed");
  app.add_option("--threads", o.threads, "Worker threads (overrides CTELIG_THREADS)");
  app.add_option("--work-dir", o.workDir, "Artifact directory");
  app.set_version_flag("--version", kVersion);

  using Handler = void (*)(Context&);
  std::vector<std::pair<CLI::App*, Handler>> commands;
  auto add = [&](const std::string& name, const std::string& help, Handler h) {
    CLI::App* sub = app.add_subcommand(name, help);
    commands.emplace_back(sub, h);
    return sub;
  };

  add("ingest", "Parse registry XML into studies.jsonl", cmdIngest)
      ->add_option("--source", o.source, "Registry directory or file");
  add("preprocess", "Split, normalize, label and augment criteria", cmdPreprocess);
  add("phrases", "Detect bigram phrases and join them in the corpus", cmdPhrases);
  add("train-embeddings", "Train word embeddings on the corpus", cmdTrainEmbeddings);
  auto* train = add("train-classifier", "Train a classifier on the training split",
                    cmdTrainClassifier);
  train->add_option("--model", o.model, "linear|cnn|svm|knn")->required();
  train->add_option("--output", o.outDir, "Model file (default under the work directory)");
  train->add_option("--embeddings", o.embeddings, "Embedding file");
  auto* evaluate = add("evaluate", "Score a model on the held-out split", cmdEvaluate);
  evaluate->add_option("--model", o.model, "Model kind or model file")->required();
  evaluate->add_flag("--cv", o.crossValidate, "Also run stratified k-fold cross-validation");
  evaluate->add_option("--simulation", o.simulation, "Clinical practice simulation TSV");
  evaluate->add_option("--embeddings", o.embeddings, "Embedding file override");
  auto* curve = add("learning-curve", "Cross-validated learning curve", cmdLearningCurve);
  curve->add_option("--model", o.model, "linear|cnn|svm|knn")->required();
  curve->add_option("--sizes", o.sizes, "Comma-separated subsample sizes");
  curve->add_option("--embeddings", o.embeddings, "Embedding file");
  auto* predict = add("predict", "Classify statements read from stdin", cmdPredict);
  predict->add_option("--model", o.model, "Model kind or model file")->required();
  predict->add_option("--embeddings", o.embeddings, "Embedding file override");
  auto* neighbors = add("neighbors", "Nearest words", cmdNeighbors);
  neighbors->add_option("word", o.words, "Query word")->required()->expected(1);
  neighbors->add_option("-k", o.k, "Number of neighbors");
  neighbors->add_option("--metric", o.metric, "cosine|euclidean");
  neighbors->add_option("--embeddings", o.embeddings, "Embedding file");
  auto* analogy = add("analogy", "3CosMul analogy: P1 - N + P2", cmdAnalogy);
  analogy->add_option("words", o.words, "P1 N P2")->required()->expected(3);
  analogy->add_option("-k", o.k, "Number of answers");
  analogy->add_option("--embeddings", o.embeddings, "Embedding file");
  auto* cluster = add("cluster", "k-means word clusters", cmdCluster);
  cluster->add_option("--top", o.top, "Most frequent words to read");
  cluster->add_option("-k", o.k, "Cluster count (default one tenth of the words)");
  cluster->add_option("--embeddings", o.embeddings, "Embedding file");
  auto* project = add("project", "Exact t-SNE projection to 2-D", cmdProject);
  project->add_option("--words", o.wordsFile, "File with one word per line");
  project->add_option("--top", o.top, "Most frequent words to project");
  project->add_option("--embeddings", o.embeddings, "Embedding file");
  auto* exportCmd = add("export-projector", "Write projector vectors and metadata",
                        cmdExportProjector);
  exportCmd->add_option("--words", o.wordsFile, "File with one word per line");
  exportCmd->add_option("--out", o.outDir, "Output directory");
  exportCmd->add_option("--embeddings", o.embeddings, "Embedding file");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, io.out, io.err);
    return code == 0 ? 0 : exitCodeFor(ErrorKind::Config);
  }

  try {
    Context ctx{resolveConfig(o), Artifacts(o.workDir), o,
                std::vector<std::string>(args.begin() + 1, args.end()), io};
    ctx.artifacts = Artifacts(ctx.config.paths.workDir);
    for (auto& [sub, handler] : commands) {
      if (sub->parsed()) handler(ctx);
    }
    return 0;
  } catch (const Error& e) {
    io.err << "error (" << toString(e.kind()) << "): " << e.what() << "\n";
    return exitCodeFor(e.kind());
  } catch (const std::exception& e) {
    io.err << "error (internal): " << e.what() << "\n";
    return 1;
  }
}

}  // namespace ctelig::cli
