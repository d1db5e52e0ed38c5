#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace selfnorm {

/// Worker count: SELFNORM_THREADS when set to a positive integer, otherwise
/// the hardware concurrency.
inline std::size_t worker_count() {
  if (const char* env = std::getenv("SELFNORM_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<std::size_t>(v);
  }
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

inline constexpr std::size_t kChunkSize = 1024;

/// Splits [0, count) into fixed-size chunks, runs body(begin, end, acc) for
/// each chunk on a pool of workers, and returns the per-chunk accumulators in
/// chunk order. Because chunk boundaries do not depend on the number of
/// workers, merging the result in order is reproducible bit for bit.
template <class Acc>
std::vector<Acc> for_each_chunk(std::size_t count,
                                const std::function<void(std::size_t, std::size_t, Acc&)>& body,
                                std::size_t chunk = kChunkSize) {
  const std::size_t chunks = (count + chunk - 1) / chunk;
  std::vector<Acc> out(chunks);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (;;) {
      const std::size_t c = next.fetch_add(1);
      if (c >= chunks) return;
      try {
        body(c * chunk, std::min(count, (c + 1) * chunk), out[c]);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(chunks);
        return;
      }
    }
  };
  const std::size_t workers = std::min(worker_count(), std::max<std::size_t>(chunks, 1));
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t i = 0; i < workers; ++i) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace selfnorm
