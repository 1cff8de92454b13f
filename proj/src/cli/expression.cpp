#include "sdelab/cli/expression.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>

#include "sdelab/errors.hpp"

namespace sdelab {

class ExpressionParser {
 public:
  using Op = Expression::Op;

  explicit ExpressionParser(const std::string& s) : s_(s) {}

  Expression run() {
    Expression e;
    e.code_.clear();
    out_ = &e.code_;
    expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    e.source_ = trim(s_);
    e.depth_ = max_depth_;
    return e;
  }

 private:
  const std::string& s_;
  std::size_t pos_ = 0;
  std::vector<Expression::Instr>* out_ = nullptr;
  std::size_t depth_ = 0;
  std::size_t max_depth_ = 0;

  static std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ValidationError("expression '" + s_ + "': " + what + " at column " + std::to_string(pos_ + 1));
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  void emit(Op op, double value = 0.0, int stack_delta = 0) {
    out_->push_back({op, value});
    if (stack_delta > 0) {
      depth_ += static_cast<std::size_t>(stack_delta);
      max_depth_ = std::max(max_depth_, depth_);
    } else {
      depth_ -= static_cast<std::size_t>(-stack_delta);
    }
  }

  void expr() {
    term();
    for (;;) {
      if (accept('+')) {
        term();
        emit(Op::add, 0, -1);
      } else if (accept('-')) {
        term();
        emit(Op::sub, 0, -1);
      } else {
        return;
      }
    }
  }

  void term() {
    unary();
    for (;;) {
      if (accept('*')) {
        unary();
        emit(Op::mul, 0, -1);
      } else if (accept('/')) {
        unary();
        emit(Op::div, 0, -1);
      } else {
        return;
      }
    }
  }

  void unary() {
    if (accept('-')) {
      unary();
      emit(Op::neg);
    } else if (accept('+')) {
      unary();
    } else {
      power();
    }
  }

  void power() {
    primary();
    if (accept('^')) {
      unary();
      emit(Op::pow, 0, -1);
    }
  }

  std::size_t args() {
    expect('(');
    std::size_t count = 0;
    skip();
    if (accept(')')) return 0;
    do {
      expr();
      ++count;
    } while (accept(','));
    expect(')');
    return count;
  }

  void primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      expr();
      expect(')');
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      double v = 0.0;
      const char* begin = s_.data() + pos_;
      const auto [ptr, ec] = std::from_chars(begin, s_.data() + s_.size(), v);
      if (ec != std::errc()) fail("bad number");
      pos_ += static_cast<std::size_t>(ptr - begin);
      emit(Op::constant, v, 1);
      return;
    }
    if (!std::isalpha(static_cast<unsigned char>(c))) fail("unexpected '" + std::string(1, c) + "'");
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    const std::string id = s_.substr(start, pos_ - start);

    if (id == "x") return emit(Op::var_x, 0, 1);
    if (id == "t") return emit(Op::var_t, 0, 1);
    if (id == "u") return emit(Op::var_u, 0, 1);
    if (id == "y") return emit(Op::var_y, 0, 1);
    if (id == "pi") return emit(Op::constant, std::numbers::pi, 1);
    if (id == "inf") return emit(Op::constant, std::numeric_limits<double>::infinity(), 1);

    struct Fn {
      const char* name;
      Op op;
      std::size_t arity;
    };
    static constexpr Fn fns[] = {{"abs", Op::abs, 1},   {"sqrt", Op::sqrt, 1}, {"exp", Op::exp, 1},
                                 {"log", Op::log, 1},   {"sin", Op::sin, 1},   {"cos", Op::cos, 1},
                                 {"sgn", Op::sgn, 1},   {"min", Op::min, 2},   {"max", Op::max, 2},
                                 {"indicator", Op::indicator, 3}};
    for (const auto& f : fns) {
      if (id != f.name) continue;
      const std::size_t n = args();
      if (f.op == Op::indicator && n == 2) {
        emit(Op::var_x, 0, 1);
      } else if (n != f.arity) {
        fail(id + " takes " + std::to_string(f.arity) + " argument(s), got " + std::to_string(n));
      }
      emit(f.op, 0, -static_cast<int>(f.arity - 1));
      return;
    }
    fail("unknown identifier '" + id +
         "' (allowed: x t u y pi inf abs sqrt exp log sin cos sgn min max indicator)");
  }
};

Expression::Expression() : source_("0"), code_{{Op::constant, 0.0}}, depth_(1) {}

Expression Expression::parse(const std::string& source) {
  Expression e = ExpressionParser(source).run();
  if (e.code_.empty()) throw ValidationError("expression is empty");
  return e;
}

double Expression::operator()(const ExpressionVars& v) const {
  double stack[64];
  stack[0] = 0.0;
  double* heap = nullptr;
  std::vector<double> big;
  if (depth_ > 64) {
    big.resize(depth_);
    heap = big.data();
  }
  double* s = heap ? heap : stack;
  std::size_t top = 0;
  for (const auto& in : code_) {
    switch (in.op) {
      case Op::constant: s[top++] = in.value; break;
      case Op::var_x: s[top++] = v.x; break;
      case Op::var_t: s[top++] = v.t; break;
      case Op::var_u: s[top++] = v.u; break;
      case Op::var_y: s[top++] = v.y; break;
      case Op::add: --top; s[top - 1] += s[top]; break;
      case Op::sub: --top; s[top - 1] -= s[top]; break;
      case Op::mul: --top; s[top - 1] *= s[top]; break;
      case Op::div: --top; s[top - 1] /= s[top]; break;
      case Op::pow: --top; s[top - 1] = std::pow(s[top - 1], s[top]); break;
      case Op::neg: s[top - 1] = -s[top - 1]; break;
      case Op::abs: s[top - 1] = std::abs(s[top - 1]); break;
      case Op::sqrt: s[top - 1] = std::sqrt(s[top - 1]); break;
      case Op::exp: s[top - 1] = std::exp(s[top - 1]); break;
      case Op::log: s[top - 1] = std::log(s[top - 1]); break;
      case Op::sin: s[top - 1] = std::sin(s[top - 1]); break;
      case Op::cos: s[top - 1] = std::cos(s[top - 1]); break;
      case Op::sgn: s[top - 1] = (s[top - 1] > 0.0) - (s[top - 1] < 0.0); break;
      case Op::min: --top; s[top - 1] = std::min(s[top - 1], s[top]); break;
      case Op::max: --top; s[top - 1] = std::max(s[top - 1], s[top]); break;
      case Op::indicator: {
        top -= 2;
        const double a = s[top - 1], b = s[top], w = s[top + 1];
        s[top - 1] = (w >= a && w < b) ? 1.0 : 0.0;
        break;
      }
    }
  }
  return s[0];
}

bool Expression::uses(char variable) const {
  Op want;
  switch (variable) {
    case 'x': want = Op::var_x; break;
    case 't': want = Op::var_t; break;
    case 'u': want = Op::var_u; break;
    case 'y': want = Op::var_y; break;
    default: return false;
  }
  for (const auto& in : code_)
    if (in.op == want) return true;
  return false;
}

bool Expression::is_constant(double* value) const {
  if (code_.size() == 1 && code_[0].op == Op::constant) {
    if (value) *value = code_[0].value;
    return true;
  }
  if (code_.size() == 2 && code_[0].op == Op::constant && code_[1].op == Op::neg) {
    if (value) *value = -code_[0].value;
    return true;
  }
  return false;
}

}  // namespace sdelab
