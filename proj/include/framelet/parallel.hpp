#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace framelet {

/*
 * Deterministic parallel loops.
 *
 * Work is split into fixed-size chunks whose boundaries depend only on the
 * problem size, never on the thread count. Reductions keep one partial sum
 * per chunk and combine them in chunk order, so floating-point results are
 * bit-identical whether the loop runs on 1 thread or 64. Nested parallel
 * regions degrade to serial execution instead of oversubscribing.
 */

namespace detail {
inline std::atomic<int>& thread_count_slot() {
  static std::atomic<int> n{0};  // 0 = use hardware concurrency
  return n;
}
inline thread_local bool in_parallel_region = false;
}  // namespace detail

inline void set_thread_count(int n) { detail::thread_count_slot().store(n); }

inline int thread_count() {
  int n = detail::thread_count_slot().load();
  if (n <= 0) n = static_cast<int>(std::thread::hardware_concurrency());
  return n > 0 ? n : 1;
}

// Default chunk: big enough to amortize dispatch, small enough to balance.
inline constexpr std::int64_t kDefaultChunk = 4096;

// Runs fn(chunk_index, begin, end) over [0, n) split into fixed chunks.
// fn must not touch state shared across chunks except through its own slot.
template <class Fn>
void parallel_for_chunked(std::int64_t n, std::int64_t chunk, Fn&& fn) {
  if (n <= 0) return;
  if (chunk <= 0) chunk = kDefaultChunk;
  const std::int64_t num_chunks = (n + chunk - 1) / chunk;
  const int workers =
      static_cast<int>(std::min<std::int64_t>(thread_count(), num_chunks));

  if (workers <= 1 || detail::in_parallel_region) {
    for (std::int64_t c = 0; c < num_chunks; ++c)
      fn(c, c * chunk, std::min(n, (c + 1) * chunk));
    return;
  }

  std::atomic<std::int64_t> next{0};
  std::exception_ptr first_error;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  auto body = [&]() {
    detail::in_parallel_region = true;
    for (;;) {
      const std::int64_t c = next.fetch_add(1);
      if (c >= num_chunks || failed.load()) break;
      try {
        fn(c, c * chunk, std::min(n, (c + 1) * chunk));
      } catch (...) {
        if (!failed.exchange(true)) first_error = std::current_exception();
        break;
      }
    }
    detail::in_parallel_region = false;
  };
  for (int w = 0; w < workers; ++w) pool.emplace_back(body);
  for (auto& t : pool) t.join();
  if (failed.load()) std::rethrow_exception(first_error);
}

// Chunk-ordered sum of term(i) for i in [0, n). Each chunk is accumulated
// serially, partials are added in ascending chunk index.
template <class Term>
double chunked_sum(std::int64_t n, Term&& term,
                   std::int64_t chunk = kDefaultChunk) {
  if (n <= 0) return 0.0;
  if (chunk <= 0) chunk = kDefaultChunk;
  const std::int64_t num_chunks = (n + chunk - 1) / chunk;
  std::vector<double> partial(static_cast<std::size_t>(num_chunks), 0.0);
  parallel_for_chunked(n, chunk,
                       [&](std::int64_t c, std::int64_t b, std::int64_t e) {
                         double s = 0.0;
                         for (std::int64_t i = b; i < e; ++i) s += term(i);
                         partial[static_cast<std::size_t>(c)] = s;
                       });
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

}  // namespace framelet
