#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "salt/search.hpp"

namespace salt {

enum class BatchMode { kSerial, kParallel };

/// Produces the result for one input; seed is base_seed + index.
using BatchWorker = std::function<SearchResult(std::size_t index, std::uint64_t seed)>;

/// Maps worker over [0, count), returning results in index order.
///
/// Each item's randomness comes only from its derived seed, so both modes
/// produce identical results; the serial mode doubles as the reference
/// implementation the parallel one is checked against. kParallel uses OpenMP
/// threads when compiled in and falls back to the serial loop otherwise.
/// A worker exception is rethrown after the loop finishes (in parallel mode,
/// whichever exception was captured first).
std::vector<SearchResult> run_batch(std::size_t count, std::uint64_t base_seed,
                                    const BatchWorker& worker, BatchMode mode);

}  // namespace salt
