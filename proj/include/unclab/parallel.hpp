#ifndef UNCLAB_PARALLEL_HPP
#define UNCLAB_PARALLEL_HPP

#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace unclab {

inline unsigned resolve_threads(int requested) {
  if (requested > 0) return static_cast<unsigned>(requested);
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

/**
 * Runs body(i) for i in [0, count). Work is index-addressed so results land
 * in preallocated slots and aggregation stays deterministic for any thread
 * count. The first exception thrown by any task is rethrown after join.
 */
template <typename Body>
void parallel_for_index(std::size_t count, int threads, Body&& body) {
  const unsigned n_threads = resolve_threads(threads);
  if (n_threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }

  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  const unsigned used = static_cast<unsigned>(std::min<std::size_t>(n_threads, count));
  pool.reserve(used);
  for (unsigned t = 0; t < used; ++t) {
    pool.emplace_back([&, t]() {
      for (std::size_t i = t; i < count; i += used) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace unclab

#endif  // UNCLAB_PARALLEL_HPP
