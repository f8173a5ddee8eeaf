#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ldp/dual.hpp"
#include "ldp/error.hpp"
#include "ldp/field.hpp"

namespace ldp::expr {

/// Malformed expression text; column() is 1-based.
class ParseError : public ParameterError {
 public:
  ParseError(const std::string& message, std::size_t column)
      : ParameterError(message + " at column " + std::to_string(column)),
        message_(message),
        column_(column) {}
  std::size_t column() const noexcept { return column_; }
  const std::string& message() const noexcept { return message_; }

 private:
  std::string message_;
  std::size_t column_;
};

/// Names an expression may refer to. `x` alone (inside norm or dot) expands
/// to x1, ..., xd.
struct Symbols {
  int d = 0;
  bool time = false;
  bool scalar_u = false;
};

/// Arithmetic over + - * / ^ (right associative, binds tighter than unary
/// minus), parentheses, numbers, the constant pi and the functions
///   abs sqrt log exp sin cos tanh sign   (one argument)
///   norm(a, b, ...) = sqrt(a^2 + b^2 + ...)
///   dot(a1..ak, b1..bk) = sum a_i b_i
/// Variables: t, x1..xd, u, as enabled by Symbols.
class Expression {
 public:
  static Expression parse(std::string_view text, const Symbols& symbols);

  template <class T>
  T eval(double t, std::span<const T> x, T u = T(0.0)) const {
    return eval_node<T>(root_, t, x, u);
  }
  double operator()(double u) const { return eval<double>(0.0, {}, u); }

  const std::string& text() const noexcept { return text_; }

  enum class Op {
    Number, Time, Component, U, Add, Sub, Mul, Div, Pow, Neg,
    Abs, Sqrt, Log, Exp, Sin, Cos, Tanh, Sign, Norm, Dot
  };
  struct Node {
    Op op;
    double value = 0.0;
    std::size_t index = 0;
    std::vector<std::size_t> args;
  };

 private:
  template <class T>
  T eval_node(std::size_t id, double t, std::span<const T> x, const T& u) const;

  std::string text_;
  std::vector<Node> nodes_;
  std::size_t root_ = 0;

  friend class Parser;
};

template <class T>
T Expression::eval_node(std::size_t id, double t, std::span<const T> x, const T& u) const {
  const Node& n = nodes_[id];
  auto arg = [&](std::size_t k) { return eval_node<T>(n.args[k], t, x, u); };
  switch (n.op) {
    case Op::Number: return T(n.value);
    case Op::Time: return T(t);
    case Op::Component: return x[n.index];
    case Op::U: return u;
    case Op::Add: return arg(0) + arg(1);
    case Op::Sub: return arg(0) - arg(1);
    case Op::Mul: return arg(0) * arg(1);
    case Op::Div: return arg(0) / arg(1);
    case Op::Pow:
      if (nodes_[n.args[1]].op == Op::Number) return pow(arg(0), nodes_[n.args[1]].value);
      return pow(arg(0), arg(1));
    case Op::Neg: return -arg(0);
    case Op::Abs: return abs(arg(0));
    case Op::Sqrt: return sqrt(arg(0));
    case Op::Log: return log(arg(0));
    case Op::Exp: return exp(arg(0));
    case Op::Sin: return sin(arg(0));
    case Op::Cos: return cos(arg(0));
    case Op::Tanh: return tanh(arg(0));
    case Op::Sign: return sign(arg(0));
    case Op::Norm: {
      T s(0.0);
      for (std::size_t k = 0; k < n.args.size(); ++k) {
        const T v = arg(k);
        s += v * v;
      }
      return sqrt(s);
    }
    case Op::Dot: {
      T s(0.0);
      const std::size_t half = n.args.size() / 2;
      for (std::size_t k = 0; k < half; ++k) s += arg(k) * arg(k + half);
      return s;
    }
  }
  return T(0.0);
}

/// Field from per-component expressions in t, x1..xd: `drift` has d entries,
/// `diffusion` has d*m entries in row-major order.
CoefficientField make_expression_field(const std::string& label, int d, int m,
                                       const std::vector<std::string>& drift,
                                       const std::vector<std::string>& diffusion);

}  // namespace ldp::expr
