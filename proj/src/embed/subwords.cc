#include "ctelig/embed/subwords.h"

#include "ctelig/common/hashing.h"

namespace ctelig::embed {

namespace {
bool isContinuation(char c) {
  return (static_cast<unsigned char>(c) & 0xC0) == 0x80;
}
}  // namespace

std::vector<std::string> charNgrams(std::string_view word, int minn, int maxn) {
  const std::string bounded = "<" + std::string(word) + ">";
  std::vector<std::string> out;
  if (minn <= 0 || maxn < minn) {
    return out;
  }
  for (std::size_t i = 0; i < bounded.size(); ++i) {
    if (isContinuation(bounded[i])) {
      continue;
    }
    std::string ngram;
    std::size_t j = i;
    for (int n = 1; j < bounded.size() && n <= maxn; ++n) {
      ngram.push_back(bounded[j++]);
      while (j < bounded.size() && isContinuation(bounded[j])) {
        ngram.push_back(bounded[j++]);
      }
      if (n >= minn) {
        out.push_back(ngram);
      }
    }
  }
  return out;
}

std::vector<std::int32_t> ngramBuckets(std::string_view word, int minn,
                                       int maxn, std::int64_t buckets) {
  std::vector<std::int32_t> out;
  if (buckets <= 0) {
    return out;
  }
  for (const auto& g : charNgrams(word, minn, maxn)) {
    out.push_back(static_cast<std::int32_t>(fnv1a32(g) % buckets));
  }
  return out;
}

}  // namespace ctelig::embed
