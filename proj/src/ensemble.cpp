#include "wavekin/ensemble.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace wavekin {

std::vector<std::vector<double>> run_indexed(
    long n, int workers, const std::function<std::vector<double>(long)>& task) {
  if (n < 0) throw std::invalid_argument("run_indexed: negative count");
  if (workers < 1) workers = 1;
  std::vector<std::vector<double>> results(static_cast<size_t>(n));
  if (n == 0) return results;
  if (workers == 1) {
    for (long i = 0; i < n; ++i) results[static_cast<size_t>(i)] = task(i);
    return results;
  }
  std::atomic<long> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&]() {
    while (true) {
      long i = next.fetch_add(1);
      if (i >= n) return;
      try {
        results[static_cast<size_t>(i)] = task(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(n);  // drain remaining work
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
  return results;
}

}  // namespace wavekin
