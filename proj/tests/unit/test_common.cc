#include <doctest.h>

#include <filesystem>
#include <set>

#include "ctelig/common/errors.h"
#include "ctelig/common/hashing.h"
#include "ctelig/common/model_file.h"
#include "ctelig/common/random.h"

using namespace ctelig;

TEST_CASE("fnv1a matches published test vectors") {
  CHECK(fnv1a32("") == 2166136261u);
  CHECK(fnv1a32("a") == 0xe40c292cu);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
}

TEST_CASE("derived seeds differ per stream and are stable") {
  CHECK(deriveSeed(7, "split") == deriveSeed(7, "split"));
  CHECK(deriveSeed(7, "split") != deriveSeed(7, "balance"));
  CHECK(deriveSeed(7, "split") != deriveSeed(8, "split"));
}

TEST_CASE("rng helpers stay in range and reproduce") {
  Rng a(3), b(3);
  for (int i = 0; i < 1000; ++i) {
    const double u = a.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    CHECK(b.uniform() == u);
    CHECK(a.below(7) < 7);
    b.below(7);
  }
  std::vector<int> v{1, 2, 3, 4, 5, 6};
  Rng c(11);
  c.shuffle(v);
  CHECK(std::multiset<int>(v.begin(), v.end()) == std::multiset<int>{1, 2, 3, 4, 5, 6});
}

TEST_CASE("exit codes follow error categories") {
  CHECK(exitCodeFor(ErrorKind::Config) == 2);
  CHECK(exitCodeFor(ErrorKind::Data) == 3);
  CHECK(exitCodeFor(ErrorKind::Budget) == 4);
}

TEST_CASE("model files round-trip blobs and header") {
  const auto path = std::filesystem::temp_directory_path() / "ctelig_model_file_test.bin";
  ModelFile file;
  file.header = {{"kind", "test"}, {"value", 3}};
  file.blobs["a"] = Blob{{2, 3}, std::vector<float>{1, 2, 3, 4, 5, 6.5f}};
  file.blobs["b"] = Blob{{2}, std::vector<double>{0.1, -2.0}};
  writeModelFile(path, file);
  const auto back = readModelFile(path);
  CHECK(back.header.at("kind") == "test");
  CHECK(back.blob("a").floats() == file.blob("a").floats());
  CHECK(back.blob("b").doubles() == file.blob("b").doubles());
  CHECK_THROWS_AS(back.blob("missing"), DataError);
  std::filesystem::remove(path);
}
