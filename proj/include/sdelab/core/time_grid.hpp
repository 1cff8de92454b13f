#pragma once

#include <cstddef>

namespace sdelab {

/// Uniform grid t_k = kT/n on [0, T].
class TimeGrid {
 public:
  TimeGrid(double horizon, std::size_t steps);

  double horizon() const noexcept { return horizon_; }
  std::size_t steps() const noexcept { return steps_; }
  double step_size() const noexcept { return horizon_ / static_cast<double>(steps_); }
  double node(std::size_t k) const noexcept {
    return horizon_ * static_cast<double>(k) / static_cast<double>(steps_);
  }

  /// Index k of the left node with t_k <= s < t_{k+1}; s = T maps to n-1.
  std::size_t cell(double s) const;
  /// Left grid node of s (the eta_n map).
  double eta(double s) const { return node(cell(s)); }

  /// True when every node of `coarse` is a node of this grid.
  bool refines(const TimeGrid& coarse) const noexcept;

 private:
  double horizon_;
  std::size_t steps_;
};

}  // namespace sdelab
