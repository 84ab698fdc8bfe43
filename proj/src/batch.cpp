#include "salt/batch.hpp"

#include <atomic>
#include <exception>

namespace salt {

namespace {

std::vector<SearchResult> run_serial(std::size_t count, std::uint64_t base_seed,
                                     const BatchWorker& worker) {
  std::vector<SearchResult> results(count);
  for (std::size_t i = 0; i < count; ++i) {
    results[i] = worker(i, base_seed + static_cast<std::uint64_t>(i));
  }
  return results;
}

}  // namespace

std::vector<SearchResult> run_batch(std::size_t count, std::uint64_t base_seed,
                                    const BatchWorker& worker, BatchMode mode) {
  if (mode == BatchMode::kSerial) return run_serial(count, base_seed, worker);

#ifdef _OPENMP
  std::vector<SearchResult> results(count);
  std::atomic<bool> failed{false};
  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < static_cast<long>(count); ++i) {
    if (failed.load(std::memory_order_relaxed)) continue;
    try {
      auto idx = static_cast<std::size_t>(i);
      results[idx] = worker(idx, base_seed + static_cast<std::uint64_t>(idx));
    } catch (...) {
#pragma omp critical(salt_batch_error)
      {
        if (!failed.exchange(true)) error = std::current_exception();
      }
    }
  }
  if (error) std::rethrow_exception(error);
  return results;
#else
  return run_serial(count, base_seed, worker);
#endif
}

}  // namespace salt
