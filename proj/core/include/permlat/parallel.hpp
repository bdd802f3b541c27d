#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace permlat {

/// Hardware threads, capped by PERMLAT_THREADS when set to a positive integer.
inline std::size_t worker_count() {
  std::size_t n = std::max(1U, std::thread::hardware_concurrency());
  if (const char* cap = std::getenv("PERMLAT_THREADS")) {
    try {
      const long value = std::stol(cap);
      if (value > 0) n = std::min(n, static_cast<std::size_t>(value));
    } catch (const std::exception&) {
      // Unparseable caps are ignored.
    }
  }
  return n;
}

/// Runs fn(i) for i in [0, count), striding indices over the workers. fn must
/// only write to per-index state so results do not depend on scheduling.
template <typename Fn>
void parallel_for(std::size_t count, Fn&& fn) {
  const std::size_t workers = std::min(worker_count(), std::max<std::size_t>(count, 1));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < count; i += workers) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace permlat
