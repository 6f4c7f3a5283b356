#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ctelig/embed/embedding.h"

namespace ctelig::embed {

struct TrainStats {
  // Mean per-pair negative-sampling loss of each epoch.
  std::vector<double> epochLoss;
  std::uint64_t updates = 0;
};

struct TrainResult {
  EmbeddingModel model;
  TrainStats stats;
};

// SGD with negative sampling over statements (one per string, tokens
// separated by spaces). Context windows never cross statements. Each
// position draws its window uniformly from [1, window]. Deterministic for a
// given seed when hyper.threads == 1.
TrainResult trainEmbeddings(std::span<const std::string> corpus,
                            const EmbeddingHyper& hyper, std::uint64_t seed);

}  // namespace ctelig::embed
