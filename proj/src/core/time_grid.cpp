#include "sdelab/core/time_grid.hpp"

#include <cmath>
#include <string>

#include "sdelab/errors.hpp"

namespace sdelab {

TimeGrid::TimeGrid(double horizon, std::size_t steps) : horizon_(horizon), steps_(steps) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw DomainError("TimeGrid: horizon must be positive and finite");
  }
  if (steps == 0) throw DomainError("TimeGrid: steps must be >= 1");
}

std::size_t TimeGrid::cell(double s) const {
  if (!(s >= 0.0 && s <= horizon_)) {
    throw DomainError("eta: s=" + std::to_string(s) + " outside [0, T]");
  }
  if (s == horizon_) return steps_ - 1;
  auto k = static_cast<std::size_t>(std::floor(static_cast<double>(steps_) * s / horizon_));
  // Repair floor() rounding against the exact node values.
  if (k >= steps_) k = steps_ - 1;
  while (k > 0 && node(k) > s) --k;
  while (k + 1 < steps_ && node(k + 1) <= s) ++k;
  return k;
}

bool TimeGrid::refines(const TimeGrid& coarse) const noexcept {
  return coarse.horizon_ == horizon_ && steps_ % coarse.steps_ == 0;
}

}  // namespace sdelab
