#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <thread>
#include <vector>

namespace wellpose {

// Worker count: hardware concurrency, capped by WELLPOSE_THREADS when set.
inline std::size_t worker_count() {
  std::size_t n = std::max<std::size_t>(1, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("WELLPOSE_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && cap >= 1) n = std::min(n, static_cast<std::size_t>(cap));
  }
  return n;
}

// Splits [0, n) into contiguous chunks, runs body(lo, hi) per chunk and
// returns the per-chunk results in chunk order. The combination is left to the
// caller, so order-independent reductions (min, max) stay deterministic.
template <class Result, class Body>
std::vector<Result> parallel_chunks(std::size_t n, Body&& body, std::size_t min_chunk = 4096) {
  const std::size_t workers = std::min(worker_count(), std::max<std::size_t>(1, n / min_chunk));
  std::vector<Result> results(workers);
  if (workers <= 1) {
    results[0] = body(std::size_t{0}, n);
    return results;
  }
  {
    std::vector<std::jthread> threads;
    threads.reserve(workers);
    const std::size_t step = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t lo = std::min(n, w * step);
      const std::size_t hi = std::min(n, lo + step);
      threads.emplace_back([&results, &body, w, lo, hi] { results[w] = body(lo, hi); });
    }
  }
  return results;
}

}  // namespace wellpose
