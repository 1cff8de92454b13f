#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace sdelab {

/// Thread count from SDELAB_THREADS, falling back to hardware concurrency.
std::size_t default_thread_count();

/// Runs body(i) for i in [0, count) on `threads` workers (0 = default).
/// Work is handed out in contiguous chunks; exceptions from any worker are
/// rethrown on the calling thread.
void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t)>& body);

/// Pairwise (tree) sum in a fixed association order, so the result depends
/// only on the values, never on how they were produced.
double tree_sum(std::span<const double> values);

struct MeanAndError {
  double mean = 0.0;
  double std_error = 0.0;  // standard error of the mean
  double variance = 0.0; // unbiased sample variance
  std::size_t count = 0;
};

/// Mean, sample variance and standard error via tree sums.
MeanAndError mean_and_error(std::span<const double> values);

}  // namespace sdelab
