#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "ctelig/cli/config.h"
#include "ctelig/common/errors.h"

using namespace ctelig;
using namespace ctelig::cli;

namespace {

std::filesystem::path writeIni(const std::string& name, const std::string& body) {
  auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << body;
  return path;
}

}  // namespace

// Published hyperparameters, written out independently of the structs.
TEST_CASE("defaults match the published hyperparameter tables") {
  PipelineConfig c;
  auto v = [&](const std::string& key) {
    for (const auto& [k, value] : c.entries()) {
      if (k == key) return value;
    }
    FAIL("no key " << key);
    return std::string();
  };
  struct Row {
    const char* key;
    const char* value;
  };
  const Row table[] = {
      // word embeddings
      {"embeddings.learning_rate", "0.025"},
      {"embeddings.dim", "100"},
      {"embeddings.window", "5"},
      {"embeddings.epochs", "5"},
      {"embeddings.min_count", "5"},
      {"embeddings.negatives", "5"},
      {"embeddings.buckets", "2000000"},
      {"embeddings.minn", "3"},
      {"embeddings.maxn", "6"},
      {"embeddings.lr_update_rate", "100"},
      {"embeddings.mode", "fasttext"},
      // linear classifier
      {"linear.learning_rate", "0.1"},
      {"linear.dim", "100"},
      {"linear.epochs", "100"},
      {"linear.min_count", "1"},
      {"linear.lr_update_rate", "100"},
      {"linear.pretrained", "true"},
      // CNN training
      {"cnn.batch_size", "128"},
      {"cnn.learning_rate", "0.001"},
      {"cnn.embedding_dim", "100"},
      {"cnn.epochs", "10"},
      {"cnn.max_words", "20000"},
      {"cnn.sequence_length", "1000"},
      {"cnn.rho", "0.9"},
      {"cnn.epsilon", "1e-08"},
      // CNN topology
      {"cnn.filters", "128"},
      {"cnn.kernel_width", "5"},
      {"cnn.pool1", "5"},
      {"cnn.pool2", "5"},
      {"cnn.pool3", "35"},
      {"cnn.dense_units", "128"},
      // SVM grid-search result
      {"svm.c", "1"},
      {"svm.gamma", "1"},
      {"svm.shrinking", "true"},
      {"svm.tolerance", "0.001"},
      // kNN
      {"knn.k", "3"},
      // phrases
      {"phrases.threshold", "500"},
      {"phrases.min_count", "20"},
      // evaluation protocol
      {"evaluate.folds", "5"},
      {"dataset.test_fraction", "0.2"},
      // clustering
      {"analyze.cluster_words", "10000"},
  };
  for (const auto& row : table) {
    CHECK_MESSAGE(v(row.key) == row.value, row.key);
  }
  // Sampling threshold follows the embedding mode.
  CHECK(c.embeddings.effective().samplingThreshold == 1e-4);
  c.set("embeddings.mode=gensim");
  CHECK(c.embeddings.effective().samplingThreshold == 1e-3);
  CHECK_FALSE(c.embeddings.effective().subwords);
  CHECK_NOTHROW(PipelineConfig{}.validate());
}

TEST_CASE("INI files override defaults") {
  auto path = writeIni("ctelig_cfg_ok.ini",
                       "[run]\nseed = 7\n\n[knn]\nk = 5\n\n[evaluate]\ncurve_sizes = 100,200\n"
                       "[preprocess]\naugment_order = intervention-first\n");
  auto c = PipelineConfig::load(path);
  CHECK(c.run.seed == 7);
  CHECK(c.classify.knn.k == 5);
  CHECK(c.evaluate.curveSizes == std::vector<std::size_t>{100, 200});
  CHECK(c.preprocess.augment.order == textprep::AugmentOrder::InterventionFirst);
  std::filesystem::remove(path);
}

TEST_CASE("unknown keys and bad values are rejected") {
  auto unknown = writeIni("ctelig_cfg_unknown.ini", "[knn]\nneighbours = 5\n");
  CHECK_THROWS_AS(PipelineConfig::load(unknown), ConfigError);
  auto section = writeIni("ctelig_cfg_section.ini", "[forest]\ntrees = 5\n");
  CHECK_THROWS_AS(PipelineConfig::load(section), ConfigError);
  auto value = writeIni("ctelig_cfg_value.ini", "[knn]\nk = three\n");
  CHECK_THROWS_AS(PipelineConfig::load(value), ConfigError);
  auto range = writeIni("ctelig_cfg_range.ini", "[knn]\nk = 0\n");
  CHECK_THROWS_AS(PipelineConfig::load(range), ConfigError);
  CHECK_THROWS_AS(PipelineConfig::load("/nonexistent/ctelig.ini"), ConfigError);
  for (auto& p : {unknown, section, value, range}) std::filesystem::remove(p);

  PipelineConfig c;
  CHECK_THROWS_AS(c.set("knn.k"), ConfigError);
  CHECK_THROWS_AS(c.set("nosection=1"), ConfigError);
  CHECK_THROWS_AS(c.set("ingest.oncology_match=fuzzy"), ConfigError);
  CHECK_THROWS_AS(c.set("svm.shrinking=maybe"), ConfigError);
}

TEST_CASE("the config hash tracks every value") {
  PipelineConfig a, b;
  CHECK(a.hash() == b.hash());
  b.set("cnn.rho=0.95");
  CHECK(a.hash() != b.hash());
  b.set("cnn.rho=0.9");
  CHECK(a.hash() == b.hash());
  // Round trip through the listing.
  PipelineConfig c;
  c.set("analyze.perplexity=12.5");
  c.set("embeddings.sampling_threshold=0.001");
  PipelineConfig d;
  for (const auto& [k, v] : c.entries()) d.set(k + "=" + v);
  CHECK(d.hash() == c.hash());
  CHECK(d.toJson() == c.toJson());
}
