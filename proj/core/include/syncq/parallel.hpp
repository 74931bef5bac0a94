#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace syncq {

/// Resolves a worker count: 0 means "all hardware threads".
inline unsigned resolve_workers(unsigned requested) {
  if (requested != 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Splits [0, count) into `chunks` contiguous ranges and calls
/// fn(chunk, begin, end) for each, using up to `workers` threads. Chunk
/// boundaries depend only on (count, chunks), never on the worker count, so
/// callers that merge per-chunk results in chunk order are deterministic.
template <class Fn>
void for_each_chunk(std::size_t count, std::size_t chunks, unsigned workers, Fn&& fn) {
  chunks = std::max<std::size_t>(1, std::min(chunks, std::max<std::size_t>(count, 1)));
  auto bounds = [&](std::size_t c) { return count * c / chunks; };
  workers = static_cast<unsigned>(std::min<std::size_t>(resolve_workers(workers), chunks));
  if (workers <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) fn(c, bounds(c), bounds(c + 1));
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t c = w; c < chunks; c += workers) fn(c, bounds(c), bounds(c + 1));
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace syncq
