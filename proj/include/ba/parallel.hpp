#pragma once

// Minimal fork-join helper.  Work is split into fixed-size chunks that do not
// depend on the worker count; combined with commutative integer accumulation
// this keeps every parallel result bit-identical for any number of threads.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <thread>
#include <vector>

namespace ba {

inline int resolve_threads(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

// Runs fn(chunk_begin, chunk_end) over [0, total) on `threads` workers.
// fn must only perform order-independent accumulation.
template <typename Fn>
void parallel_chunks(std::int64_t total, std::int64_t chunk, int threads,
                     Fn&& fn) {
  if (total <= 0) return;
  threads = resolve_threads(threads);
  if (threads == 1 || total <= chunk) {
    for (std::int64_t b = 0; b < total; b += chunk) {
      fn(b, std::min(total, b + chunk));
    }
    return;
  }
  std::atomic<std::int64_t> next{0};
  auto worker = [&] {
    while (true) {
      const std::int64_t b = next.fetch_add(chunk);
      if (b >= total) return;
      fn(b, std::min(total, b + chunk));
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

}  // namespace ba
