#include "ldp/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace ldp {

unsigned worker_count() {
  if (const char* env = std::getenv("LDP_WORKERS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_chunks(std::size_t count,
                     const std::function<void(unsigned, std::size_t, std::size_t)>& body,
                     unsigned workers) {
  if (count == 0) return;
  workers = static_cast<unsigned>(std::clamp<std::size_t>(workers, 1, count));
  if (workers == 1) {
    body(0, 0, count);
    return;
  }
  std::exception_ptr error;
  std::mutex mutex;
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    const std::size_t begin = count * w / workers;
    const std::size_t end = count * (w + 1) / workers;
    threads.emplace_back([&, w, begin, end] {
      try {
        body(w, begin, end);
      } catch (...) {
        const std::lock_guard lock(mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace ldp
