#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace ctelig {

// Runs body(begin, end) over contiguous chunks of [0, n). Chunks are fixed by
// n and threads alone, so per-index results do not depend on scheduling.
// The first exception thrown by a chunk is rethrown.
template <typename Body>
void parallelFor(std::size_t n, unsigned threads, Body&& body) {
  threads = static_cast<unsigned>(
      std::max<std::size_t>(1, std::min<std::size_t>(threads, n)));
  if (threads <= 1) {
    if (n > 0) {
      body(std::size_t{0}, n);
    }
    return;
  }
  const std::size_t chunk = (n + threads - 1) / threads;
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    const std::size_t b = t * chunk;
    const std::size_t e = std::min(n, b + chunk);
    if (b >= e) {
      break;
    }
    pool.emplace_back([&, t, b, e] {
      try {
        body(b, e);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) {
    th.join();
  }
  for (auto& err : errors) {
    if (err) {
      std::rethrow_exception(err);
    }
  }
}

}  // namespace ctelig
