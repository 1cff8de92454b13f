#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "sdelab/core/time_grid.hpp"

namespace sdelab {

/// Values of one simulated trajectory at the nodes of its grid. A path that
/// produced a non-finite state stops there; `diverged_at` holds the step
/// index whose update overflowed.
struct Path {
  std::vector<double> values;
  std::optional<std::size_t> diverged_at;

  bool diverged() const noexcept { return diverged_at.has_value(); }
  double terminal() const { return values.back(); }
};

/// M sample paths on one grid plus the driving increments that produced them.
class PathEnsemble {
 public:
  PathEnsemble(TimeGrid grid, std::size_t paths);

  const TimeGrid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return paths_; }
  std::size_t nodes() const noexcept { return grid_.steps() + 1; }

  std::span<double> values(std::size_t path);
  std::span<const double> values(std::size_t path) const;
  std::span<double> increments(std::size_t path);
  std::span<const double> increments(std::size_t path) const;

 private:
  TimeGrid grid_;
  std::size_t paths_;
  std::vector<double> values_;
  std::vector<double> increments_;
};

/// Sums consecutive groups of `factor` fine increments. The result drives the
/// coarse scheme with the same Brownian (or stable, or fBm) path.
std::vector<double> coarsen_increments(std::span<const double> fine, std::size_t factor);

/// Cumulative sum with a leading x0.
std::vector<double> cumulate(double x0, std::span<const double> increments);

}  // namespace sdelab
