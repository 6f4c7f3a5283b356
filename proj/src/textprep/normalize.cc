#include "ctelig/textprep/normalize.h"

#include <array>
#include <vector>

namespace ctelig::textprep {

namespace {

constexpr std::array<const char*, 10> kDigits = {
    "zero", "one", "two", "three", "four",
    "five", "six", "seven", "eight", "nine"};

constexpr std::array<const char*, 20> kSmall = {
    "zero",    "one",     "two",       "three",    "four",
    "five",    "six",     "seven",     "eight",    "nine",
    "ten",     "eleven",  "twelve",    "thirteen", "fourteen",
    "fifteen", "sixteen", "seventeen", "eighteen", "nineteen"};

constexpr std::array<const char*, 10> kTens = {
    "", "", "twenty", "thirty", "forty", "fifty", "sixty", "seventy",
    "eighty", "ninety"};

bool isLetter(char c) { return c >= 'a' && c <= 'z'; }
bool isUpper(char c) { return c >= 'A' && c <= 'Z'; }
bool isDigit(char c) { return c >= '0' && c <= '9'; }
bool isAlnum(char c) { return isLetter(c) || isUpper(c) || isDigit(c); }

void appendHundreds(unsigned value, std::vector<std::string>& words) {
  if (value >= 100) {
    words.emplace_back(kSmall[value / 100]);
    words.emplace_back("hundred");
    value %= 100;
  }
  if (value >= 20) {
    words.emplace_back(kTens[value / 10]);
    value %= 10;
    if (value != 0) {
      words.emplace_back(kSmall[value]);
    }
  } else if (value != 0) {
    words.emplace_back(kSmall[value]);
  }
}

class Normalizer {
 public:
  explicit Normalizer(const NormalizeOptions& options) : options_(options) {}

  std::string run(std::string_view text) {
    const std::size_t n = text.size();
    auto at = [&](std::size_t i) -> char { return i < n ? text[i] : '\0'; };
    auto prevAlnum = [&](std::size_t i) { return i > 0 && isAlnum(text[i - 1]); };

    for (std::size_t i = 0; i < n; ++i) {
      const char c = text[i];
      if (isLetter(c) || isUpper(c)) {
        word_.push_back(static_cast<char>(isUpper(c) ? c - 'A' + 'a' : c));
      } else if (c == '_' && !word_.empty() && isLetter(word_.back()) &&
                 (isLetter(at(i + 1)) || isUpper(at(i + 1)))) {
        word_.push_back('_');
      } else if (isDigit(c)) {
        flush();
        i = number(text, i) - 1;
      } else if (c == '>') {
        flush();
        if (at(i + 1) == '=') {
          emit("greater_equal");
          ++i;
        } else {
          emit("greater_than");
        }
      } else if (c == '<') {
        flush();
        if (at(i + 1) == '=') {
          emit("less_equal");
          ++i;
        } else {
          emit("less_than");
        }
      } else if (c == '=') {
        flush();
        emit("equal");
        while (at(i + 1) == '=') {
          ++i;
        }
      } else if (c == '+') {
        flush();
        if (prevAlnum(i) || isAlnum(at(i + 1))) {
          emit("positive");
        }
      } else if (c == '-') {
        flush();
        minus(text, i, i + 1);
      } else if (static_cast<unsigned char>(c) == 0xE2 && at(i + 1) == '\x89' &&
                 (at(i + 2) == '\xA5' || at(i + 2) == '\xA4')) {
        flush();
        emit(at(i + 2) == '\xA5' ? "greater_equal" : "less_equal");
        i += 2;
      } else if (static_cast<unsigned char>(c) == 0xE2 && at(i + 1) == '\x88' &&
                 at(i + 2) == '\x92') {
        // U+2212 minus sign.
        flush();
        minus(text, i, i + 3);
        i += 2;
      } else {
        flush();
      }
    }
    flush();

    std::string out;
    for (const auto& token : tokens_) {
      if (token.size() < 2) {
        continue;
      }
      if (!out.empty()) {
        out.push_back(' ');
      }
      out.append(token);
    }
    return out;
  }

 private:
  void flush() {
    while (!word_.empty() && word_.back() == '_') {
      word_.pop_back();
    }
    if (!word_.empty()) {
      tokens_.push_back(std::move(word_));
      word_.clear();
    }
  }

  void emit(std::string token) { tokens_.push_back(std::move(token)); }

  // begin is the sign's first byte, next the byte after it.
  void minus(std::string_view text, std::size_t begin, std::size_t next) {
    const bool before = begin > 0 && isAlnum(text[begin - 1]);
    const char after = next < text.size() ? text[next] : '\0';
    const bool afterAlnum = isAlnum(after);
    const bool afterNumber =
        isDigit(after) ||
        (after == '.' && next + 1 < text.size() && isDigit(text[next + 1]));
    if (before && afterAlnum) {
      return;  // hyphenated word
    }
    if (before || afterNumber) {
      emit("negative");
    }
  }

  // Consumes a number starting at i and returns the index past it.
  std::size_t number(std::string_view text, std::size_t i) {
    std::string integer;
    std::string fraction;
    bool inFraction = false;
    const std::size_t n = text.size();
    while (i < n) {
      const char c = text[i];
      if (isDigit(c)) {
        (inFraction ? fraction : integer).push_back(c);
        ++i;
      } else if ((c == '.' || c == ',') && i + 1 < n && isDigit(text[i + 1])) {
        if (c == '.') {
          if (inFraction) {
            break;  // "1.2.3": second dot separates
          }
          inFraction = true;
        }
        ++i;
      } else {
        break;
      }
    }
    spell(integer);
    if (inFraction) {
      emit("point");
      for (char d : fraction) {
        emit(kDigits[d - '0']);
      }
    }
    return i;
  }

  void spell(const std::string& digits) {
    const bool cardinal = options_.numbers == NumberStyle::Cardinal &&
                          digits.size() <= 12 &&
                          (digits.size() == 1 || digits[0] != '0');
    if (!cardinal) {
      for (char d : digits) {
        emit(kDigits[d - '0']);
      }
      return;
    }
    const std::string words = cardinalWords(std::stoull(digits));
    std::size_t start = 0;
    while (start < words.size()) {
      auto end = words.find(' ', start);
      if (end == std::string::npos) {
        end = words.size();
      }
      emit(words.substr(start, end - start));
      start = end + 1;
    }
  }

  const NormalizeOptions& options_;
  std::vector<std::string> tokens_;
  std::string word_;
};

}  // namespace

std::string cardinalWords(unsigned long long value) {
  if (value == 0) {
    return "zero";
  }
  static constexpr std::array<const char*, 4> kScales = {"", "thousand",
                                                         "million", "billion"};
  std::vector<unsigned> groups;
  while (value > 0) {
    groups.push_back(static_cast<unsigned>(value % 1000));
    value /= 1000;
  }
  std::vector<std::string> words;
  for (std::size_t g = groups.size(); g-- > 0;) {
    if (groups[g] == 0) {
      continue;
    }
    appendHundreds(groups[g], words);
    if (g > 0) {
      words.emplace_back(kScales[g]);
    }
  }
  std::string out;
  for (const auto& w : words) {
    if (!out.empty()) {
      out.push_back(' ');
    }
    out += w;
  }
  return out;
}

std::string normalize(std::string_view text, const NormalizeOptions& options) {
  return Normalizer(options).run(text);
}

}  // namespace ctelig::textprep
