#include "ctelig/cli/config.h"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <sstream>

#include "ctelig/common/errors.h"
#include "ctelig/common/hashing.h"

namespace ctelig::cli {

embed::EmbeddingHyper EmbeddingsConfig::effective() const {
  embed::EmbeddingHyper h = hyper;
  h.subwords = mode == EmbeddingMode::FastText;
  h.samplingThreshold = samplingThreshold.value_or(
      h.subwords ? embed::kSubwordSamplingThreshold : embed::kPlainSamplingThreshold);
  return h;
}

namespace {

struct Binding {
  std::string section;
  std::string key;
  std::function<void(const std::string&)> parse;
  std::function<std::string()> format;
};

[[noreturn]] void badValue(const std::string& key, const std::string& value,
                           const std::string& expected) {
  throw ConfigError("invalid value '" + value + "' for " + key + " (expected " +
                    expected + ")");
}

std::string formatDouble(double v) {
  char buf[32];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

template <typename T>
T parseNumber(const std::string& key, const std::string& value) {
  T out{};
  const char* end = value.data() + value.size();
  auto r = std::from_chars(value.data(), end, out);
  if (r.ec != std::errc() || r.ptr != end) {
    badValue(key, value, "a number");
  }
  return out;
}

bool parseBool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
  if (value == "false" || value == "0" || value == "no" || value == "off") return false;
  badValue(key, value, "true or false");
}

class Registry {
 public:
  void add(Binding b) { bindings_.push_back(std::move(b)); }

  template <typename T>
  void number(const std::string& section, const std::string& key, T& ref) {
    const std::string name = section + "." + key;
    add({section, key,
         [&ref, name](const std::string& v) { ref = parseNumber<T>(name, v); },
         [&ref] {
           if constexpr (std::is_floating_point_v<T>) {
             return formatDouble(ref);
           } else {
             return std::to_string(ref);
           }
         }});
  }

  void flag(const std::string& section, const std::string& key, bool& ref) {
    const std::string name = section + "." + key;
    add({section, key, [&ref, name](const std::string& v) { ref = parseBool(name, v); },
         [&ref] { return std::string(ref ? "true" : "false"); }});
  }

  void text(const std::string& section, const std::string& key, std::string& ref) {
    add({section, key, [&ref](const std::string& v) { ref = v; }, [&ref] { return ref; }});
  }

  void path(const std::string& section, const std::string& key, fs::path& ref) {
    add({section, key, [&ref](const std::string& v) { ref = v; },
         [&ref] { return ref.generic_string(); }});
  }

  template <typename E>
  void choice(const std::string& section, const std::string& key, E& ref,
              std::vector<std::pair<std::string, E>> options) {
    const std::string name = section + "." + key;
    add({section, key,
         [&ref, name, options](const std::string& v) {
           std::string expected;
           for (const auto& [label, value] : options) {
             if (label == v) {
               ref = value;
               return;
             }
             expected += (expected.empty() ? "" : "|") + label;
           }
           badValue(name, v, expected);
         },
         [&ref, options] {
           for (const auto& [label, value] : options) {
             if (value == ref) return label;
           }
           return std::string("?");
         }});
  }

  Binding* find(const std::string& section, const std::string& key) {
    for (auto& b : bindings_) {
      if (b.section == section && b.key == key) return &b;
    }
    return nullptr;
  }

  const std::vector<Binding>& all() const { return bindings_; }

 private:
  std::vector<Binding> bindings_;
};

// Every configurable key. The order here is the canonical order used for
// hashing and manifests.
Registry registryFor(PipelineConfig& c) {
  Registry r;
  r.path("paths", "registry", c.paths.registry);
  r.path("paths", "work_dir", c.paths.workDir);
  r.path("paths", "simulation", c.paths.simulation);

  r.number("run", "seed", c.run.seed);
  r.number("run", "threads", c.run.threads);

  r.choice("ingest", "oncology_match", c.ingest.match,
           {{"substring", ingest::OncologyMatch::Substring},
            {"strict", ingest::OncologyMatch::StrictToken}});
  r.flag("ingest", "sort_by_id", c.ingest.sortByStudyId);

  auto& aug = c.preprocess.augment;
  r.choice("preprocess", "number_style", aug.normalize.numbers,
           {{"digits", textprep::NumberStyle::DigitWise},
            {"cardinal", textprep::NumberStyle::Cardinal}});
  r.text("preprocess", "condition_prefix", aug.conditionPrefix);
  r.text("preprocess", "intervention_prefix", aug.interventionPrefix);
  r.choice("preprocess", "augment_order", aug.order,
           {{"condition-first", textprep::AugmentOrder::ConditionFirst},
            {"intervention-first", textprep::AugmentOrder::InterventionFirst}});

  auto& ph = c.phrases.params;
  r.flag("phrases", "enabled", c.phrases.enabled);
  r.number("phrases", "delta", ph.delta);
  r.number("phrases", "threshold", ph.threshold);
  r.number("phrases", "min_count", ph.minCount);
  r.choice("phrases", "scaling", ph.scaling,
           {{"corpus", phrases::ScoreScaling::CorpusWords},
            {"unit", phrases::ScoreScaling::Unit}});

  auto& e = c.embeddings.hyper;
  r.choice("embeddings", "mode", c.embeddings.mode,
           {{"fasttext", EmbeddingMode::FastText}, {"gensim", EmbeddingMode::Gensim}});
  r.choice("embeddings", "architecture", e.architecture,
           {{"skipgram", embed::Architecture::SkipGram},
            {"cbow", embed::Architecture::Cbow}});
  r.number("embeddings", "learning_rate", e.learningRate);
  r.number("embeddings", "dim", e.dim);
  r.number("embeddings", "window", e.window);
  r.number("embeddings", "epochs", e.epochs);
  r.number("embeddings", "min_count", e.minCount);
  r.number("embeddings", "negatives", e.negatives);
  auto& threshold = c.embeddings.samplingThreshold;
  r.add({"embeddings", "sampling_threshold",
         [&threshold](const std::string& v) {
           if (v == "auto") {
             threshold.reset();
           } else {
             threshold = parseNumber<double>("embeddings.sampling_threshold", v);
           }
         },
         [&threshold] { return threshold ? formatDouble(*threshold) : std::string("auto"); }});
  r.number("embeddings", "lr_update_rate", e.lrUpdateRate);
  r.number("embeddings", "buckets", e.buckets);
  r.number("embeddings", "minn", e.minn);
  r.number("embeddings", "maxn", e.maxn);
  r.number("embeddings", "negative_power", e.negativePower);

  r.number("dataset", "max_samples", c.dataset.maxSamples);
  r.number("dataset", "test_fraction", c.dataset.testFraction);

  auto& lin = c.classify.linear;
  r.number("linear", "learning_rate", lin.learningRate);
  r.number("linear", "dim", lin.dim);
  r.number("linear", "epochs", lin.epochs);
  r.number("linear", "min_count", lin.minCount);
  r.number("linear", "lr_update_rate", lin.lrUpdateRate);
  r.flag("linear", "pretrained", c.classify.linearPretrained);
  r.flag("linear", "freeze_embeddings", lin.freezeEmbeddings);

  auto& cnn = c.classify.cnn;
  r.number("cnn", "sequence_length", cnn.sequenceLength);
  r.number("cnn", "max_words", cnn.maxWords);
  r.number("cnn", "embedding_dim", cnn.embeddingDim);
  r.number("cnn", "filters", cnn.filters);
  r.number("cnn", "kernel_width", cnn.kernelWidth);
  r.number("cnn", "pool1", cnn.pools[0]);
  r.number("cnn", "pool2", cnn.pools[1]);
  r.number("cnn", "pool3", cnn.pools[2]);
  r.number("cnn", "dense_units", cnn.denseUnits);
  r.number("cnn", "batch_size", cnn.batchSize);
  r.number("cnn", "learning_rate", cnn.learningRate);
  r.number("cnn", "rho", cnn.rho);
  r.number("cnn", "epsilon", cnn.epsilon);
  r.number("cnn", "epochs", cnn.epochs);
  r.flag("cnn", "pretrained", c.classify.cnnPretrained);
  r.flag("cnn", "freeze_embeddings", cnn.freezeEmbeddings);

  auto& svm = c.classify.svm;
  r.number("svm", "c", svm.c);
  r.number("svm", "gamma", svm.gamma);
  r.number("svm", "tolerance", svm.tolerance);
  r.flag("svm", "shrinking", svm.shrinking);
  r.number("svm", "cache_mb", svm.cacheMegabytes);
  r.number("svm", "budget", svm.budget);
  r.number("svm", "max_iterations", svm.maxIterations);

  r.number("knn", "k", c.classify.knn.k);

  r.number("evaluate", "folds", c.evaluate.folds);
  auto& sizes = c.evaluate.curveSizes;
  r.add({"evaluate", "curve_sizes",
         [&sizes](const std::string& v) {
           std::vector<std::size_t> out;
           std::stringstream ss(v);
           for (std::string item; std::getline(ss, item, ',');) {
             out.push_back(parseNumber<std::size_t>("evaluate.curve_sizes", item));
           }
           if (out.empty()) badValue("evaluate.curve_sizes", v, "a comma-separated list");
           sizes = out;
         },
         [&sizes] {
           std::string s;
           for (auto n : sizes) s += (s.empty() ? "" : ",") + std::to_string(n);
           return s;
         }});

  auto& a = c.analyze;
  r.number("analyze", "cluster_words", a.clusterWords);
  r.number("analyze", "clusters", a.clusters);
  r.number("analyze", "kmeans_max_iterations", a.kmeansMaxIterations);
  r.number("analyze", "tsne_words", a.tsneWords);
  r.number("analyze", "perplexity", a.tsne.perplexity);
  r.number("analyze", "tsne_iterations", a.tsne.iterations);
  r.number("analyze", "tsne_learning_rate", a.tsne.learningRate);
  r.number("analyze", "tsne_exaggeration", a.tsne.exaggeration);
  r.number("analyze", "tsne_exaggeration_iterations", a.tsne.exaggerationIterations);
  r.number("analyze", "tsne_max_points", a.tsne.maxPoints);
  r.number("analyze", "neighbors", a.neighbors);
  return r;
}

}  // namespace

PipelineConfig PipelineConfig::load(const fs::path& path) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::read_ini(path.string(), tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("cannot read config " + path.string() + ": " + e.message() +
                      " (line " + std::to_string(e.line()) + ")");
  }
  PipelineConfig c;
  for (const auto& [section, keys] : tree) {
    if (keys.empty() && !keys.data().empty()) {
      throw ConfigError(path.string() + ": key '" + section +
                        "' is outside any [section]");
    }
    for (const auto& [key, value] : keys) {
      c.set(section, key, value.data());
    }
  }
  c.validate();
  return c;
}

void PipelineConfig::set(const std::string& section, const std::string& key,
                         const std::string& value) {
  auto r = registryFor(*this);
  Binding* b = r.find(section, key);
  if (b == nullptr) {
    throw ConfigError("unknown configuration key " + section + "." + key);
  }
  b->parse(value);
}

void PipelineConfig::set(const std::string& assignment) {
  const auto eq = assignment.find('=');
  const auto dot = assignment.find('.');
  if (eq == std::string::npos || dot == std::string::npos || dot > eq) {
    throw ConfigError("expected section.key=value, got '" + assignment + "'");
  }
  set(assignment.substr(0, dot), assignment.substr(dot + 1, eq - dot - 1),
      assignment.substr(eq + 1));
}

std::vector<std::pair<std::string, std::string>> PipelineConfig::entries() const {
  auto r = registryFor(const_cast<PipelineConfig&>(*this));
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& b : r.all()) {
    out.emplace_back(b.section + "." + b.key, b.format());
  }
  return out;
}

nlohmann::json PipelineConfig::toJson() const {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [k, v] : entries()) {
    j[k] = v;
  }
  return j;
}

std::string PipelineConfig::hash() const {
  std::string canonical;
  for (const auto& [k, v] : entries()) {
    canonical += k + "=" + v + "\n";
  }
  return toHex(fnv1a64(canonical));
}

void PipelineConfig::validate() const {
  if (run.threads == 0) throw ConfigError("run.threads must be >= 1");
  if (!(phrases.params.threshold >= 0.0) || !(phrases.params.delta >= 0.0)) {
    throw ConfigError("phrases.threshold and phrases.delta must be >= 0");
  }
  embeddings.effective().validate();
  if (!(dataset.testFraction > 0.0 && dataset.testFraction < 1.0)) {
    throw ConfigError("dataset.test_fraction must lie in (0, 1)");
  }
  classify.linear.validate();
  classify.cnn.validate();
  classify.svm.validate();
  classify.knn.validate();
  if (evaluate.folds < 2) throw ConfigError("evaluate.folds must be >= 2");
  analyze.tsne.validate();
  if (analyze.clusterWords == 0 || analyze.tsneWords == 0 || analyze.neighbors == 0) {
    throw ConfigError("analyze word counts must be >= 1");
  }
}

}  // namespace ctelig::cli
