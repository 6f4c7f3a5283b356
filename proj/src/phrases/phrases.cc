#include "ctelig/phrases/phrases.h"

#include <algorithm>
#include <charconv>
#include <iomanip>
#include <limits>
#include <stdexcept>

#include "ctelig/common/errors.h"

namespace ctelig::phrases {

namespace {

std::vector<std::string_view> tokens(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    while (pos < text.size() && text[pos] == ' ') {
      ++pos;
    }
    const auto start = pos;
    while (pos < text.size() && text[pos] != ' ') {
      ++pos;
    }
    if (pos > start) {
      out.push_back(text.substr(start, pos - start));
    }
  }
  return out;
}

std::string pairKey(std::string_view a, std::string_view b) {
  std::string key;
  key.reserve(a.size() + b.size() + 1);
  key.append(a);
  key.push_back(' ');
  key.append(b);
  return key;
}

}  // namespace

void NgramCounts::add(std::string_view statement) {
  const auto toks = tokens(statement);
  for (std::size_t i = 0; i < toks.size(); ++i) {
    ++unigrams[std::string(toks[i])];
    if (i + 1 < toks.size()) {
      ++bigrams[pairKey(toks[i], toks[i + 1])];
    }
  }
  totalWords += toks.size();
}

void NgramCounts::merge(const NgramCounts& other) {
  for (const auto& [w, c] : other.unigrams) {
    unigrams[w] += c;
  }
  for (const auto& [p, c] : other.bigrams) {
    bigrams[p] += c;
  }
  totalWords += other.totalWords;
}

std::uint64_t NgramCounts::unigram(std::string_view word) const {
  const auto it = unigrams.find(std::string(word));
  return it == unigrams.end() ? 0 : it->second;
}

std::uint64_t NgramCounts::bigram(std::string_view first,
                                  std::string_view second) const {
  const auto it = bigrams.find(pairKey(first, second));
  return it == bigrams.end() ? 0 : it->second;
}

NgramCounts countNgrams(std::span<const std::string> statements) {
  NgramCounts counts;
  for (const auto& s : statements) {
    counts.add(s);
  }
  return counts;
}

double scoreBigram(std::uint64_t pairCount, std::uint64_t countA,
                   std::uint64_t countB, double delta, double scale) {
  if (countA == 0 || countB == 0) {
    throw std::invalid_argument("bigram score needs positive word counts");
  }
  return (static_cast<double>(pairCount) - delta) /
         (static_cast<double>(countA) * static_cast<double>(countB)) * scale;
}

void PhraseTable::insert(std::string first, std::string second, double score) {
  scores_[pairKey(first, second)] = score;
}

bool PhraseTable::contains(std::string_view first,
                           std::string_view second) const {
  return scores_.count(pairKey(first, second)) > 0;
}

std::vector<PhraseEntry> PhraseTable::sortedEntries() const {
  std::vector<PhraseEntry> out;
  out.reserve(scores_.size());
  for (const auto& [key, score] : scores_) {
    const auto space = key.find(' ');
    out.push_back({key.substr(0, space), key.substr(space + 1), score});
  }
  std::sort(out.begin(), out.end(), [](const PhraseEntry& a, const PhraseEntry& b) {
    if (a.score != b.score) {
      return a.score > b.score;
    }
    if (a.first != b.first) {
      return a.first < b.first;
    }
    return a.second < b.second;
  });
  return out;
}

PhraseTable detectPhrases(const NgramCounts& counts, const PhraseParams& params) {
  PhraseTable table(params, counts.totalWords);
  const double scale = params.scaling == ScoreScaling::CorpusWords
                           ? static_cast<double>(counts.totalWords)
                           : 1.0;
  for (const auto& [key, pairCount] : counts.bigrams) {
    if (static_cast<double>(pairCount) <= params.delta) {
      continue;
    }
    const auto space = key.find(' ');
    const std::string_view view(key);
    const auto a = view.substr(0, space);
    const auto b = view.substr(space + 1);
    const auto ca = counts.unigram(a);
    const auto cb = counts.unigram(b);
    if (ca < params.minCount || cb < params.minCount) {
      continue;
    }
    const double score = scoreBigram(pairCount, ca, cb, params.delta, scale);
    if (score >= params.threshold) {
      table.insert(std::string(a), std::string(b), score);
    }
  }
  return table;
}

PhraseTable detectPhrases(std::span<const std::string> statements,
                          const PhraseParams& params) {
  return detectPhrases(countNgrams(statements), params);
}

std::string applyPhrases(std::string_view text, const PhraseTable& table) {
  const auto toks = tokens(text);
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < toks.size(); ++i) {
    if (!out.empty()) {
      out.push_back(' ');
    }
    out.append(toks[i]);
    if (i + 1 < toks.size() && table.contains(toks[i], toks[i + 1])) {
      out.push_back('_');
      out.append(toks[i + 1]);
      ++i;
    }
  }
  return out;
}

void writeTsv(std::ostream& out, const PhraseTable& table) {
  const auto flags = out.flags();
  const auto precision = out.precision();
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (const auto& e : table.sortedEntries()) {
    out << e.first << '\t' << e.second << '\t' << e.score << '\n';
  }
  out.flags(flags);
  out.precision(precision);
}

PhraseTable readTsv(std::istream& in, const std::string& name) {
  PhraseTable table;
  std::string line;
  std::size_t lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    if (line.empty()) {
      continue;
    }
    const auto t1 = line.find('\t');
    const auto t2 =
        t1 == std::string::npos ? std::string::npos : line.find('\t', t1 + 1);
    if (t2 == std::string::npos || t1 == 0 || t2 == t1 + 1) {
      throw FormatError(name, lineNo, "expected word_a<TAB>word_b<TAB>score");
    }
    double score = 0.0;
    try {
      std::size_t used = 0;
      score = std::stod(line.substr(t2 + 1), &used);
      if (used != line.size() - t2 - 1) {
        throw std::invalid_argument("trailing characters");
      }
    } catch (const std::exception&) {
      throw FormatError(name, lineNo, "score is not a number");
    }
    table.insert(line.substr(0, t1), line.substr(t1 + 1, t2 - t1 - 1), score);
  }
  return table;
}

}  // namespace ctelig::phrases
