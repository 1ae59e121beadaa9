#include "srn/parallel.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace srn {

void parallel_chunks(std::uint64_t n_items, std::uint64_t chunk_size,
                     unsigned threads,
                     const std::function<void(std::uint64_t, std::uint64_t,
                                              std::uint64_t)>& body) {
  if (n_items == 0) return;
  const std::uint64_t n_chunks = (n_items + chunk_size - 1) / chunk_size;
  if (threads == 0) threads = std::thread::hardware_concurrency();
  if (threads == 0) threads = 1;
  if (threads > n_chunks) threads = static_cast<unsigned>(n_chunks);

  if (threads == 1) {
    for (std::uint64_t c = 0; c < n_chunks; ++c)
      body(c, c * chunk_size, std::min(n_items, (c + 1) * chunk_size));
    return;
  }

  std::atomic<std::uint64_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;

  auto worker = [&]() {
    for (;;) {
      const std::uint64_t c = next.fetch_add(1);
      if (c >= n_chunks) return;
      try {
        body(c, c * chunk_size, std::min(n_items, (c + 1) * chunk_size));
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace srn
