#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tinf/jet.hpp"

namespace tinf {

/// Immutable scalar expression tree over input variables x0, x1, ...
///
/// Built either with the operator overloads below or by `parse_expression`.
/// Grammar (usual precedence, `^` right-associative and binding tighter than
/// unary minus):
///
///     expr   := term (('+' | '-') term)*
///     term   := unary (('*' | '/') unary)*
///     unary  := '-' unary | power
///     power  := atom ('^' unary)?
///     atom   := number | 'x' digits | func '(' expr ')' | '(' expr ')'
///     func   := sin | cos | exp | log | sqrt
class Expr {
 public:
  enum class Op { constant, variable, neg, add, sub, mul, div, pow, sin, cos, exp, log, sqrt };

  Expr() : Expr(0.0) {}
  Expr(double value);  // NOLINT(google-explicit-constructor)

  static Expr variable(std::size_t index);

  Op op() const noexcept;
  /// Highest variable index referenced plus one.
  std::size_t arity() const noexcept;
  bool is_constant() const noexcept { return op() == Op::constant; }
  double constant_value() const;

  Jet eval(std::span<const Jet> inputs) const;
  double eval(std::span<const double> inputs) const;

  std::string to_string() const;

  friend Expr operator-(const Expr& a);
  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  friend Expr pow(const Expr& a, const Expr& b);
  friend Expr sin(const Expr& a);
  friend Expr cos(const Expr& a);
  friend Expr exp(const Expr& a);
  friend Expr log(const Expr& a);
  friend Expr sqrt(const Expr& a);
  friend Expr parse_expression(std::string_view text);

  struct Node;  // implementation detail

 private:
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static Expr unary(Op op, const Expr& a);
  static Expr binary(Op op, const Expr& a, const Expr& b);

  std::shared_ptr<const Node> node_;
};

/// Parses one expression. Throws ParseError on malformed input.
Expr parse_expression(std::string_view text);

}  // namespace tinf
