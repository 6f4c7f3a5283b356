#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace ctelig::embed {

// Character n-grams (min..max UTF-8 characters) of "<word>", in order of
// start position then length.
std::vector<std::string> charNgrams(std::string_view word, int minn, int maxn);

// FNV-1a (32-bit) of each n-gram modulo the bucket count.
std::vector<std::int32_t> ngramBuckets(std::string_view word, int minn,
                                       int maxn, std::int64_t buckets);

}  // namespace ctelig::embed
