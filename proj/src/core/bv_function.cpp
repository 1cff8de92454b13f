#include "sdelab/core/bv_function.hpp"

#include <algorithm>
#include <cmath>

#include "sdelab/errors.hpp"

namespace sdelab {

BVFunction::BVFunction(double constant, std::vector<Jump> jumps) : constant_(constant) {
  for (const auto& j : jumps) add_jump(j.location, j.size, j.closure);
}

BVFunction BVFunction::step_up(double z) { return BVFunction(0.0, {{z, 1.0, Closure::right}}); }

BVFunction BVFunction::indicator_le(double z) {
  return BVFunction(1.0, {{z, -1.0, Closure::right}});
}

BVFunction BVFunction::sign(double z) { return BVFunction(-1.0, {{z, 2.0, Closure::right}}); }

BVFunction& BVFunction::add_jump(double location, double size, Closure closure) {
  if (!std::isfinite(location) || !std::isfinite(size)) {
    throw DomainError("BVFunction: jump location and size must be finite");
  }
  auto it = std::lower_bound(jumps_.begin(), jumps_.end(), location,
                             [](const Jump& j, double z) { return j.location < z; });
  if (it != jumps_.end() && it->location == location) {
    if (it->closure != closure) {
      throw DomainError("BVFunction: conflicting closures at one jump location");
    }
    it->size += size;
  } else {
    jumps_.insert(it, Jump{location, size, closure});
  }
  rebuild_prefix();
  return *this;
}

void BVFunction::rebuild_prefix() {
  prefix_.assign(jumps_.size() + 1, 0.0);
  for (std::size_t i = 0; i < jumps_.size(); ++i) prefix_[i + 1] = prefix_[i] + jumps_[i].size;
}

double BVFunction::operator()(double x) const {
  // Jumps strictly below x always count.
  const auto it = std::lower_bound(jumps_.begin(), jumps_.end(), x,
                                   [](const Jump& j, double z) { return j.location < z; });
  const auto below = static_cast<std::size_t>(it - jumps_.begin());
  double value = constant_ + prefix_[below];
  if (it != jumps_.end() && it->location == x && it->closure == Closure::left) value += it->size;
  return value;
}

double BVFunction::total_variation() const {
  double v = 0.0;
  for (const auto& j : jumps_) v += std::abs(j.size);
  return v;
}

}  // namespace sdelab
