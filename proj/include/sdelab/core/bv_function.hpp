#pragma once

#include <span>
#include <vector>

namespace sdelab {

/// Which side of a jump location carries the jump.
///  - Closure::left : the jump is already included at z, g = c + lambda on [z, inf)
///  - Closure::right: the jump starts just after z,  g = c + lambda on (z, inf)
enum class Closure { left, right };

struct Jump {
  double location;
  double size;
  Closure closure;
};

/// Pure-jump function of bounded variation: g(x) = c + sum of jumps at or
/// below x, with closure deciding the value at a jump location.
class BVFunction {
 public:
  explicit BVFunction(double constant = 0.0) : constant_(constant) {}
  BVFunction(double constant, std::vector<Jump> jumps);

  /// 1_{(z, inf)}
  static BVFunction step_up(double z);
  /// 1_{(-inf, z]}
  static BVFunction indicator_le(double z);
  /// -1 on (-inf, z], +1 on (z, inf)
  static BVFunction sign(double z = 0.0);

  /// Adds a jump. A second jump at an existing location is merged when the
  /// closures agree and rejected otherwise.
  BVFunction& add_jump(double location, double size, Closure closure);

  double operator()(double x) const;
  double total_variation() const;

  double constant() const noexcept { return constant_; }
  std::span<const Jump> jumps() const noexcept { return jumps_; }

 private:
  double constant_;
  std::vector<Jump> jumps_;  // strictly increasing locations
  std::vector<double> prefix_{0.0};  // prefix_[i] = sum of sizes of jumps_[0..i)
  void rebuild_prefix();
};

inline double bv_total_variation(const BVFunction& g) { return g.total_variation(); }
inline double bv_eval(const BVFunction& g, double x) { return g(x); }

}  // namespace sdelab
