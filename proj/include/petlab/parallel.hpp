#pragma once

// Minimal data-parallel helpers. Work is always split into a fixed number of
// blocks that does not depend on the thread count, and block results are
// combined in block order, so every reduction is bit-stable no matter how
// many workers run.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <span>
#include <thread>
#include <vector>

namespace petlab::parallel {

namespace detail {
inline std::atomic<unsigned> g_max_threads{0};
}

// 0 selects std::thread::hardware_concurrency().
inline void set_max_threads(unsigned n) { detail::g_max_threads.store(n); }

inline unsigned max_threads() {
  unsigned n = detail::g_max_threads.load();
  if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
  return n;
}

// Calls fn(b) for every b in [0, blocks). Exceptions from workers are
// rethrown on the calling thread (the first one wins).
template <class Fn>
void for_blocks(std::size_t blocks, Fn&& fn) {
  const std::size_t workers =
      std::min<std::size_t>(blocks, static_cast<std::size_t>(max_threads()));
  if (workers <= 1) {
    for (std::size_t b = 0; b < blocks; ++b) fn(b);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto body = [&] {
    for (;;) {
      const std::size_t b = next.fetch_add(1);
      if (b >= blocks) return;
      try {
        fn(b);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(blocks);
        return;
      }
    }
  };
  std::vector<std::jthread> pool;
  pool.reserve(workers - 1);
  for (std::size_t i = 1; i < workers; ++i) pool.emplace_back(body);
  body();
  pool.clear();
  if (error) std::rethrow_exception(error);
}

// Pairwise (cascade) summation; the association order depends only on the
// input length.
template <class T>
T pairwise_sum(std::span<const T> values) {
  if (values.empty()) return T(0);
  if (values.size() <= 8) {
    T acc = T(0);
    for (const T& v : values) acc += v;
    return acc;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

}  // namespace petlab::parallel
