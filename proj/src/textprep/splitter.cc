#include "ctelig/textprep/splitter.h"

#include <array>
#include <cctype>

namespace ctelig::textprep {

namespace {

bool isSpace(char c) {
  return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' ||
         c == '\v';
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && isSpace(s.front())) {
    s.remove_prefix(1);
  }
  while (!s.empty() && isSpace(s.back())) {
    s.remove_suffix(1);
  }
  return s;
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

bool startsWith(std::string_view s, std::string_view prefix) {
  return s.substr(0, prefix.size()) == prefix;
}

bool isRoman(std::string_view s) {
  static constexpr std::array<std::string_view, 12> kRoman = {
      "i", "ii", "iii", "iv", "v", "vi", "vii", "viii", "ix", "x", "xi", "xii"};
  const std::string l = lower(s);
  for (auto r : kRoman) {
    if (l == r) {
      return true;
    }
  }
  return false;
}

// Length of a leading list marker (including trailing whitespace), or 0.
std::size_t markerLength(std::string_view t) {
  static constexpr std::array<std::string_view, 4> kUtf8Bullets = {
      "\xE2\x80\xA2", "\xC2\xB7", "\xE2\x80\x93", "\xE2\x97\x8F"};
  auto withSpace = [&](std::size_t n) -> std::size_t {
    std::size_t m = n;
    while (m < t.size() && isSpace(t[m])) {
      ++m;
    }
    return m;
  };
  for (auto b : kUtf8Bullets) {
    if (startsWith(t, b)) {
      return withSpace(b.size());
    }
  }
  if (t.empty()) {
    return 0;
  }
  const char c = t[0];
  if (c == '*' || c == '-') {
    if (t.size() == 1) {
      return 1;
    }
    if (isSpace(t[1]) || std::isalpha(static_cast<unsigned char>(t[1])) ||
        t[1] == '(') {
      return withSpace(1);
    }
    if (c == '*' || t[1] == '-') {
      const auto k = t.find_first_not_of(c);
      return k == std::string_view::npos ? t.size() : withSpace(k);
    }
    return 0;
  }
  if (c == 'o' && t.size() > 1 && isSpace(t[1])) {
    return withSpace(1);
  }
  // (1)  (a)  (iv)
  if (c == '(') {
    const auto close = t.find(')');
    if (close != std::string_view::npos && close > 1 && close <= 4) {
      const auto inner = t.substr(1, close - 1);
      bool digits = true;
      for (char d : inner) {
        digits = digits && std::isdigit(static_cast<unsigned char>(d));
      }
      const bool letter =
          inner.size() == 1 && std::isalpha(static_cast<unsigned char>(inner[0]));
      if (digits || letter || isRoman(inner)) {
        return withSpace(close + 1);
      }
    }
    return 0;
  }
  // 1.  12)  a.  b)  iv.
  std::size_t n = 0;
  while (n < t.size() && n < 4 && std::isalnum(static_cast<unsigned char>(t[n]))) {
    ++n;
  }
  if (n == 0 || n >= t.size() || (t[n] != '.' && t[n] != ')')) {
    return 0;
  }
  // "1.5" or "a.b" are values, not markers.
  if (n + 1 < t.size() && !isSpace(t[n + 1])) {
    return 0;
  }
  const auto head = t.substr(0, n);
  bool digits = true;
  for (char d : head) {
    digits = digits && std::isdigit(static_cast<unsigned char>(d));
  }
  const bool letter = n == 1 && std::isalpha(static_cast<unsigned char>(head[0]));
  if ((digits && n <= 3) || letter || isRoman(head)) {
    return withSpace(n + 1);
  }
  return 0;
}

struct Header {
  Section section;
  std::string_view remainder;
};

bool parseHeader(std::string_view t, Header& header) {
  const std::string l = lower(t);
  std::size_t pos = std::string::npos;
  Section section = Section::Unspecified;
  for (auto [phrase, s] :
       {std::pair{std::string_view("inclusion criteria"), Section::Inclusion},
        std::pair{std::string_view("exclusion criteria"), Section::Exclusion}}) {
    const auto p = l.find(phrase);
    if (p != std::string::npos && p < pos) {
      pos = p;
      section = s;
    }
  }
  if (pos == std::string::npos) {
    return false;
  }
  int words = 0;
  bool inWord = false;
  for (std::size_t i = 0; i < pos; ++i) {
    const bool w = !isSpace(l[i]);
    if (w && !inWord) {
      ++words;
    }
    inWord = w;
  }
  if (words > 3) {
    return false;
  }
  const std::size_t after = pos + std::string_view("inclusion criteria").size();
  const std::string_view rest = trim(std::string_view(l).substr(after));
  if (!rest.empty() && rest[0] != ':' && rest[0] != '-' && rest[0] != '(') {
    return false;
  }
  header.section = section;
  const auto colon = t.find(':', after);
  header.remainder =
      colon == std::string_view::npos ? std::string_view{} : trim(t.substr(colon + 1));
  return true;
}

bool isAbbreviation(std::string_view word) {
  static constexpr std::array<std::string_view, 14> kAbbrev = {
      "dr", "mr", "mrs", "ms", "vs", "no", "nos", "e.g", "i.e", "etc",
      "approx", "fig", "st", "al"};
  const std::string l = lower(word);
  for (auto a : kAbbrev) {
    if (l == a) {
      return true;
    }
  }
  return false;
}

void splitSentences(std::string_view text, std::vector<std::string>& out) {
  std::size_t start = 0;
  for (std::size_t i = 0; i + 2 < text.size(); ++i) {
    if (text[i] != '.' || !isSpace(text[i + 1])) {
      continue;
    }
    std::size_t j = i + 1;
    while (j < text.size() && isSpace(text[j])) {
      ++j;
    }
    if (j >= text.size() || !std::isupper(static_cast<unsigned char>(text[j]))) {
      continue;
    }
    std::size_t w = i;
    while (w > start && !isSpace(text[w - 1])) {
      --w;
    }
    const auto word = text.substr(w, i - w);
    if (word.size() <= 1 || isAbbreviation(word)) {
      continue;
    }
    const auto sentence = trim(text.substr(start, i + 1 - start));
    if (!sentence.empty()) {
      out.emplace_back(sentence);
    }
    start = j;
  }
  const auto tail = trim(text.substr(start));
  if (!tail.empty()) {
    out.emplace_back(tail);
  }
}

class Builder {
 public:
  Builder(std::string_view studyId, std::vector<SectionedCriterion>& out)
      : studyId_(studyId), out_(out) {}

  void setSection(Section s) { section_ = s; }

  void start(std::string_view text) {
    flush();
    current_ = std::string(text);
  }

  void append(std::string_view text) {
    if (!current_.empty()) {
      current_.push_back(' ');
    }
    current_.append(text);
  }

  void flush() {
    std::vector<std::string> sentences;
    splitSentences(current_, sentences);
    for (auto& s : sentences) {
      out_.push_back({section_, std::move(s), std::string(studyId_)});
    }
    current_.clear();
  }

 private:
  std::string_view studyId_;
  std::vector<SectionedCriterion>& out_;
  Section section_ = Section::Unspecified;
  std::string current_;
};

void consumeLine(std::string_view line, Builder& builder) {
  const std::size_t marker = markerLength(line);
  const std::string_view body = trim(line.substr(marker));
  Header header{};
  if (parseHeader(body, header)) {
    builder.flush();
    builder.setSection(header.section);
    if (!header.remainder.empty()) {
      const std::size_t m = markerLength(header.remainder);
      builder.start(trim(header.remainder.substr(m)));
    }
    return;
  }
  if (marker > 0) {
    builder.start(body);
  } else {
    builder.append(body);
  }
}

}  // namespace

const char* toString(Section section) noexcept {
  switch (section) {
    case Section::Inclusion:
      return "inclusion";
    case Section::Exclusion:
      return "exclusion";
    case Section::Unspecified:
      return "unspecified";
  }
  return "unspecified";
}

std::vector<SectionedCriterion> splitStatements(std::string_view criteriaText,
                                                std::string_view studyId) {
  std::vector<SectionedCriterion> out;
  Builder builder(studyId, out);
  std::size_t pos = 0;
  while (pos <= criteriaText.size()) {
    auto eol = criteriaText.find('\n', pos);
    if (eol == std::string_view::npos) {
      eol = criteriaText.size();
    }
    const auto line = trim(criteriaText.substr(pos, eol - pos));
    if (line.empty()) {
      builder.flush();
    } else {
      consumeLine(line, builder);
    }
    pos = eol + 1;
  }
  builder.flush();
  return out;
}

}  // namespace ctelig::textprep
