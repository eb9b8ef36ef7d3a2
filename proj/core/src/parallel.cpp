#include "dnp/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace dnp {

namespace {
constexpr std::size_t kChunk = 2048;
}

int thread_count() {
  static const int count = [] {
    const char* env = std::getenv("DNP_THREADS");
    if (env == nullptr) return 1;
    const int v = std::atoi(env);
    return std::clamp(v, 1, 256);
  }();
  return count;
}

std::size_t chunk_count(std::size_t n) { return n == 0 ? 0 : (n + kChunk - 1) / kChunk; }

std::size_t chunk_begin(std::size_t n, std::size_t chunk) { return std::min(n, chunk * kChunk); }

std::size_t chunk_index(std::size_t begin) { return begin / kChunk; }

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body) {
  const std::size_t chunks = chunk_count(n);
  const int workers = std::min<std::size_t>(thread_count(), chunks);
  if (workers <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) body(chunk_begin(n, c), chunk_begin(n, c + 1));
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t c = next++; c < chunks; c = next++) {
        try {
          body(chunk_begin(n, c), chunk_begin(n, c + 1));
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace dnp
