#include <doctest.h>

#include <limits>
#include <map>
#include <random>
#include <sstream>

#include "ctelig/common/errors.h"
#include "ctelig/phrases/phrases.h"

using namespace ctelig::phrases;

namespace {

std::vector<std::string> tokens(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string t; in >> t;) out.push_back(t);
  return out;
}

// Naive recount: for every pair of positions, compare against every other.
struct NaiveCounts {
  std::map<std::string, std::uint64_t> unigrams;
  std::map<std::pair<std::string, std::string>, std::uint64_t> bigrams;
  std::uint64_t total = 0;
};

NaiveCounts naiveCount(const std::vector<std::string>& corpus) {
  NaiveCounts out;
  std::vector<std::vector<std::string>> split;
  for (const auto& s : corpus) split.push_back(tokens(s));
  for (const auto& toks : split) {
    out.total += toks.size();
    for (const auto& t : toks) {
      if (out.unigrams.count(t)) continue;
      std::uint64_t n = 0;
      for (const auto& other : split) {
        for (const auto& u : other) n += (u == t);
      }
      out.unigrams[t] = n;
    }
    for (std::size_t i = 0; i + 1 < toks.size(); ++i) {
      const auto key = std::make_pair(toks[i], toks[i + 1]);
      if (out.bigrams.count(key)) continue;
      std::uint64_t n = 0;
      for (const auto& other : split) {
        for (std::size_t j = 0; j + 1 < other.size(); ++j) {
          n += other[j] == key.first && other[j + 1] == key.second;
        }
      }
      out.bigrams[key] = n;
    }
  }
  return out;
}

std::vector<std::string> sunitinibCorpus() {
  std::vector<std::string> corpus;
  std::mt19937 gen(17);
  std::uniform_int_distribution<int> filler(0, 4999);
  for (int i = 0; i < 5000; ++i) {
    std::string s;
    for (int j = 0; j < 8; ++j) s += "filler" + std::to_string(filler(gen)) + " ";
    if (i < 50) s += "sunitinib malate ";
    s += "common words end";
    corpus.push_back(s);
  }
  return corpus;
}

}  // namespace

TEST_CASE("count_ngrams hand counts") {
  const std::vector<std::string> one{"a b a"};
  const auto c = countNgrams(one);
  CHECK(c.unigram("a") == 2);
  CHECK(c.unigram("b") == 1);
  CHECK(c.bigram("a", "b") == 1);
  CHECK(c.bigram("b", "a") == 1);
  CHECK(c.totalWords == 3);

  const std::vector<std::string> two{"a b", "b a"};
  const auto d = countNgrams(two);
  CHECK(d.bigram("b", "a") == 1);
  CHECK(d.bigram("b", "b") == 0);
}

TEST_CASE("count_ngrams equals a naive recount") {
  std::mt19937 gen(3);
  std::uniform_int_distribution<int> word(0, 30), len(1, 12);
  std::vector<std::string> corpus;
  for (int i = 0; i < 1000; ++i) {
    std::string s;
    const int n = len(gen);
    for (int j = 0; j < n; ++j) s += (j ? " w" : "w") + std::to_string(word(gen));
    corpus.push_back(s);
  }
  const auto fast = countNgrams(corpus);
  const auto slow = naiveCount(corpus);
  CHECK(fast.totalWords == slow.total);
  CHECK(fast.unigrams.size() == slow.unigrams.size());
  CHECK(fast.bigrams.size() == slow.bigrams.size());
  for (const auto& [w, n] : slow.unigrams) CHECK(fast.unigram(w) == n);
  for (const auto& [p, n] : slow.bigrams) CHECK(fast.bigram(p.first, p.second) == n);
}

TEST_CASE("score_bigram formula") {
  CHECK(scoreBigram(30, 100, 50, 20, 1000) == doctest::Approx(2.0));
  CHECK(scoreBigram(30, 100, 50, 20, 1) == doctest::Approx(0.002));
  CHECK(scoreBigram(20, 7, 9, 20, 1234) == 0.0);
  CHECK_THROWS_AS(scoreBigram(5, 0, 3, 20, 1), std::invalid_argument);
  CHECK_THROWS_AS(scoreBigram(5, 3, 0, 20, 1), std::invalid_argument);
}

TEST_CASE("score_bigram monotonicity") {
  for (std::uint64_t ab = 21; ab < 60; ab += 3) {
    for (std::uint64_t a = 60; a < 90; a += 7) {
      for (std::uint64_t b = 60; b < 90; b += 5) {
        const double s = scoreBigram(ab, a, b, 20, 1000);
        CHECK(scoreBigram(ab + 1, a, b, 20, 1000) > s);
        CHECK(scoreBigram(ab, a + 1, b, 20, 1000) < s);
        CHECK(scoreBigram(ab, a, b + 1, 20, 1000) < s);
      }
    }
  }
}

TEST_CASE("detect_phrases finds a planted collocation") {
  const auto corpus = sunitinibCorpus();
  const auto table = detectPhrases(corpus);
  CHECK(table.contains("sunitinib", "malate"));
  CHECK_FALSE(table.contains("malate", "common"));
  for (const auto& e : table.sortedEntries()) CHECK(e.score >= 500.0);
}

TEST_CASE("pairs at or below delta are never accepted") {
  std::vector<std::string> corpus(20, "rare pair");
  for (int i = 0; i < 40; ++i) corpus.push_back("rare other pair x");
  PhraseParams params;
  params.threshold = -1e18;
  params.minCount = 1;
  const auto table = detectPhrases(corpus, params);
  CHECK_FALSE(table.contains("rare", "pair"));
  CHECK(table.contains("rare", "other"));
}

TEST_CASE("detect_phrases threshold monotonicity") {
  const auto corpus = sunitinibCorpus();
  const auto counts = countNgrams(corpus);
  PhraseParams params;
  params.minCount = 1;
  params.threshold = std::numeric_limits<double>::infinity();
  CHECK(detectPhrases(counts, params).empty());
  CHECK(detectPhrases(std::vector<std::string>{}, params).empty());
  std::size_t previous = 0;
  for (double t : {1e6, 1e4, 1e3, 100.0, 10.0, 1.0, 0.0}) {
    params.threshold = t;
    const auto table = detectPhrases(counts, params);
    CHECK(table.size() >= previous);
    for (const auto& e : detectPhrases(counts, {params.delta, t * 10 + 1, 1}).sortedEntries()) {
      CHECK(table.contains(e.first, e.second));
    }
    previous = table.size();
  }
}

TEST_CASE("apply_phrases greedy joins") {
  PhraseTable table;
  table.insert("von", "willebrand", 900);
  CHECK(applyPhrases("von willebrand factor", table) == "von_willebrand factor");
  CHECK(applyPhrases("von willebrand factor", PhraseTable{}) == "von willebrand factor");

  PhraseTable chain;
  chain.insert("a", "b", 1);
  chain.insert("b", "c", 2);
  CHECK(applyPhrases("a b c", chain) == "a_b c");
  CHECK(applyPhrases("b c a b", chain) == "b_c a_b");
}

TEST_CASE("property: splitting joins recovers the original tokens") {
  PhraseTable table;
  table.insert("w1", "w2", 1);
  table.insert("w2", "w3", 1);
  table.insert("w3", "w3", 1);
  std::mt19937 gen(8);
  std::uniform_int_distribution<int> word(1, 4), len(0, 15);
  for (int trial = 0; trial < 300; ++trial) {
    std::string s;
    const int n = len(gen);
    for (int j = 0; j < n; ++j) s += (j ? " w" : "w") + std::to_string(word(gen));
    std::string joined = applyPhrases(s, table);
    for (auto& ch : joined) {
      if (ch == '_') ch = ' ';
    }
    CHECK(joined == s);
  }
}

TEST_CASE("phrase table TSV round-trip") {
  PhraseTable table(PhraseParams{}, 1000);
  table.insert("von", "willebrand", 912.5);
  table.insert("sunitinib", "malate", 1e4 / 3);
  std::stringstream buf;
  writeTsv(buf, table);
  const auto back = readTsv(buf, "phrases.tsv");
  const auto a = table.sortedEntries(), b = back.sortedEntries();
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].first == b[i].first);
    CHECK(a[i].score == b[i].score);
  }
  CHECK(a[0].first == "sunitinib");
  std::stringstream bad("a\tb\tnot-a-number\n");
  CHECK_THROWS_AS(readTsv(bad, "bad.tsv"), ctelig::FormatError);
}
