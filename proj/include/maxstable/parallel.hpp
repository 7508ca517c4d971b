#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace maxstable {

[[nodiscard]] inline unsigned resolve_workers(unsigned requested) {
  if (requested > 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

// Runs body(i) for i in [0, count) over `workers` threads using contiguous
// chunks. Results must be written to per-index slots; iteration order within
// a worker is ascending. The first exception thrown is rethrown.
template <class Body>
void parallel_for(std::size_t count, unsigned workers, Body&& body) {
  const std::size_t n_threads = std::min<std::size_t>(resolve_workers(workers), count);
  if (n_threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(n_threads);
  std::vector<std::thread> threads;
  threads.reserve(n_threads);
  const std::size_t chunk = (count + n_threads - 1) / n_threads;
  for (std::size_t w = 0; w < n_threads; ++w) {
    threads.emplace_back([&, w] {
      const std::size_t begin = w * chunk;
      const std::size_t end = std::min(count, begin + chunk);
      try {
        for (std::size_t i = begin; i < end; ++i) body(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace maxstable
