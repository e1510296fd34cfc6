#pragma once

#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <utility>
#include <vector>

namespace mclahe {

/// Resolves a requested worker count: 0 means "all hardware threads".
inline unsigned resolve_threads(unsigned requested) {
  if (requested != 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

/// Runs fn(begin, end) over contiguous chunks of [0, count). Chunk bounds
/// depend only on count and the worker count, never on scheduling, so any
/// computation writing to disjoint per-index outputs is reproducible for
/// every worker count.
template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
  threads = resolve_threads(threads);
  if (count == 0) return;
  if (threads <= 1 || count == 1) {
    fn(std::size_t{0}, count);
    return;
  }

  const std::size_t workers = std::min<std::size_t>(threads, count);
  const std::size_t chunk = count / workers;
  const std::size_t extra = count % workers;

  std::exception_ptr error;
  std::mutex error_mutex;
  auto run = [&](std::size_t begin, std::size_t end) {
    try {
      fn(begin, end);
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!error) error = std::current_exception();
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  std::size_t begin = 0;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t end = begin + chunk + (w < extra ? 1 : 0);
    if (w + 1 == workers) {
      run(begin, end);  // last chunk on the calling thread
    } else {
      pool.emplace_back(run, begin, end);
    }
    begin = end;
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace mclahe
