#pragma once

#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace ng {

// Runs fn(block_index, begin, end) over [0, n) split into fixed-size blocks.
// The block layout depends only on n and block_size, never on the thread
// count, so per-block partial results can be folded in block order to give
// bit-identical output for any number of workers.
template <typename Fn>
void parallel_blocks(std::int64_t n, std::int64_t block_size, int threads,
                     Fn&& fn) {
  if (n <= 0) return;
  if (block_size <= 0) block_size = 1;
  const std::int64_t blocks = (n + block_size - 1) / block_size;
  if (threads <= 1 || blocks == 1) {
    for (std::int64_t b = 0; b < blocks; ++b) {
      const std::int64_t begin = b * block_size;
      const std::int64_t end = begin + block_size < n ? begin + block_size : n;
      fn(b, begin, end);
    }
    return;
  }
  if (threads > blocks) threads = static_cast<int>(blocks);

  std::atomic<std::int64_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const std::int64_t b = next.fetch_add(1);
      if (b >= blocks) return;
      const std::int64_t begin = b * block_size;
      const std::int64_t end = begin + block_size < n ? begin + block_size : n;
      try {
        fn(b, begin, end);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

inline std::int64_t block_count(std::int64_t n, std::int64_t block_size) {
  if (n <= 0) return 0;
  if (block_size <= 0) block_size = 1;
  return (n + block_size - 1) / block_size;
}

}  // namespace ng
