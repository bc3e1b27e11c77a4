#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace tempo {

/// Worker count from TEMPO_BELL_THREADS if set to a positive integer,
/// otherwise the hardware concurrency (at least 1).
unsigned default_worker_count();

/// Runs body(i) for i in [0, n) on up to `workers` threads (0 = default).
/// Indices are handed out in contiguous blocks; body must only write to
/// per-index state.
void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& body);

/// Pairwise (tree) summation. The association order depends only on the
/// length of `values`, so the result is bit-stable.
double pairwise_sum(std::span<const double> values);

}  // namespace tempo
