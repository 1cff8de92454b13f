#pragma once

#include <string>
#include <vector>

namespace sdelab {

struct ExpressionVars {
  double x = 0.0;
  double t = 0.0;
  double u = 0.0;
  double y = 0.0;
};

/// Arithmetic over x, t, u, y: literals, pi, inf, + - * / ^ (right
/// associative), abs sqrt exp log sin cos sgn, min max, and
/// indicator(a, b[, v]) = 1 on [a, b) for v (default x).
class Expression {
 public:
  static Expression parse(const std::string& source);

  /// The constant 0.
  Expression();

  double operator()(const ExpressionVars& vars) const;
  double operator()(double x, double t = 0.0, double u = 0.0, double y = 0.0) const {
    return (*this)(ExpressionVars{x, t, u, y});
  }

  const std::string& source() const noexcept { return source_; }
  bool uses(char variable) const;
  /// True when the expression is a single literal; `value` receives it.
  bool is_constant(double* value = nullptr) const;

 private:
  enum class Op : unsigned char {
    constant, var_x, var_t, var_u, var_y,
    add, sub, mul, div, pow, neg,
    abs, sqrt, exp, log, sin, cos, sgn,
    min, max, indicator
  };
  struct Instr {
    Op op;
    double value;
  };

  std::string source_;
  std::vector<Instr> code_;
  std::size_t depth_ = 0;

  friend class ExpressionParser;
};

}  // namespace sdelab
