#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <thread>
#include <vector>

namespace pmd {

// Splits [0, total) into fixed-size chunks, maps each chunk to a partial
// result, and folds the partials in chunk-index order.  Because the chunk
// boundaries depend only on `chunk_size` and the fold order is fixed, the
// result is bit-identical for any worker count.
//
// map(begin, end) -> Partial evaluates one chunk; combine(acc, partial)
// folds a chunk result into the accumulator.  Exceptions thrown by map are
// rethrown on the calling thread.
template <typename Partial, typename Map, typename Combine>
Partial chunked_reduce(std::uint64_t total, std::uint64_t chunk_size, unsigned workers,
                       Partial init, Map map, Combine combine) {
  if (chunk_size == 0) throw std::invalid_argument("chunk_size must be positive");
  if (total == 0) return init;
  const std::uint64_t chunks = (total + chunk_size - 1) / chunk_size;
  if (workers == 0) workers = 1;

  Partial acc = std::move(init);
  if (workers == 1 || chunks == 1) {
    for (std::uint64_t c = 0; c < chunks; ++c) {
      const std::uint64_t begin = c * chunk_size;
      const std::uint64_t end = std::min(total, begin + chunk_size);
      acc = combine(std::move(acc), map(begin, end));
    }
    return acc;
  }

  std::vector<std::optional<Partial>> partials(chunks);
  std::atomic<std::uint64_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto worker = [&]() {
    for (;;) {
      const std::uint64_t c = next.fetch_add(1);
      if (c >= chunks || failed.load()) return;
      const std::uint64_t begin = c * chunk_size;
      const std::uint64_t end = std::min(total, begin + chunk_size);
      try {
        partials[c].emplace(map(begin, end));
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        failed.store(true);
        return;
      }
    }
  };

  const unsigned spawn = static_cast<unsigned>(std::min<std::uint64_t>(workers, chunks));
  std::vector<std::thread> pool;
  pool.reserve(spawn);
  for (unsigned t = 0; t < spawn; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);

  for (std::uint64_t c = 0; c < chunks; ++c) acc = combine(std::move(acc), std::move(*partials[c]));
  return acc;
}

}  // namespace pmd
