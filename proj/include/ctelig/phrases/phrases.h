#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace ctelig::phrases {

// Unigram and adjacent-pair counts. Pairs never cross statement boundaries.
// Pair keys are "first second" (tokens never contain spaces).
struct NgramCounts {
  std::unordered_map<std::string, std::uint64_t> unigrams;
  std::unordered_map<std::string, std::uint64_t> bigrams;
  std::uint64_t totalWords = 0;

  void add(std::string_view statement);
  void merge(const NgramCounts& other);
  std::uint64_t unigram(std::string_view word) const;
  std::uint64_t bigram(std::string_view first, std::string_view second) const;
};

NgramCounts countNgrams(std::span<const std::string> statements);

// (pairCount - delta) / (countA * countB) * scale. scale = 1 gives the bare
// collocation score; scale = total corpus words gives the corpus-size
// normalized score used for thresholds in the hundreds.
double scoreBigram(std::uint64_t pairCount, std::uint64_t countA,
                   std::uint64_t countB, double delta, double scale);

enum class ScoreScaling { CorpusWords, Unit };

struct PhraseParams {
  double delta = 20.0;
  double threshold = 500.0;
  std::uint64_t minCount = 20;
  ScoreScaling scaling = ScoreScaling::CorpusWords;
};

struct PhraseEntry {
  std::string first;
  std::string second;
  double score = 0.0;
};

class PhraseTable {
 public:
  PhraseTable() = default;
  PhraseTable(PhraseParams params, std::uint64_t corpusWords)
      : params_(params), corpusWords_(corpusWords) {}

  void insert(std::string first, std::string second, double score);
  bool contains(std::string_view first, std::string_view second) const;
  std::size_t size() const { return scores_.size(); }
  bool empty() const { return scores_.empty(); }

  // Descending by score, ties by (first, second).
  std::vector<PhraseEntry> sortedEntries() const;

  const PhraseParams& params() const { return params_; }
  std::uint64_t corpusWords() const { return corpusWords_; }

 private:
  std::unordered_map<std::string, double> scores_;  // key "first second"
  PhraseParams params_;
  std::uint64_t corpusWords_ = 0;
};

// One pass over bigram candidates. A pair is accepted when both words occur
// at least minCount times, the pair occurs more than delta times, and its
// score reaches the threshold.
PhraseTable detectPhrases(const NgramCounts& counts, const PhraseParams& params = {});
PhraseTable detectPhrases(std::span<const std::string> statements,
                          const PhraseParams& params = {});

// Greedy left-to-right join of adjacent accepted pairs as "a_b"; a token
// consumed by a join is not reused.
std::string applyPhrases(std::string_view text, const PhraseTable& table);

// TSV "word_a<TAB>word_b<TAB>score", sorted descending by score.
void writeTsv(std::ostream& out, const PhraseTable& table);
PhraseTable readTsv(std::istream& in, const std::string& name);

}  // namespace ctelig::phrases
