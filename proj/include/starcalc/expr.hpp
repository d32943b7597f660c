#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "starcalc/geometry.hpp"

namespace starcalc {

/// A real-valued function on the phase space written in a small closed
/// expression language, so that kernels and densities stay serializable.
///
/// Grammar (standard precedence, `^` binds tightest and takes a
/// non-negative integer literal):
///
///     expr    := term (('+' | '-') term)*
///     term    := unary (('*' | '/') unary)*
///     unary   := '-' unary | power
///     power   := primary ('^' integer)?
///     primary := number | 'x' digits | 'x[' digits ']'
///              | 'exp(' expr ')' | 'abs(' expr ')'
///              | 'ind(' a0 ',' b0 (',' a_i ',' b_i)* ')' | '(' expr ')'
///
/// `ind(a0,b0,a1,b1,...)` is the indicator of the closed sub-box
/// [a0,b0] x [a1,b1] x ...; it constrains only the listed axes.
class Expr {
 public:
  Expr();  // the constant 0

  static Expr constant(double c);
  static Expr coord(std::size_t axis);
  static Expr indicator(std::vector<Interval> sub_box);
  static Expr parse(std::string_view text);

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a);
  friend Expr exp(const Expr& a);
  friend Expr abs(const Expr& a);
  friend Expr pow(const Expr& a, unsigned exponent);

  double operator()(std::span<const double> x) const;

  /// Interval enclosure of the range over `box` (conservative).
  Interval bound(const Box& box) const;

  /// Discontinuity locations along `axis` (indicator faces).
  void collect_breakpoints(std::size_t axis, std::vector<double>& out) const;

  /// Number of axes referenced (max coordinate index + 1).
  std::size_t arity() const;

  std::optional<double> constant_value() const;
  std::string to_string() const;

  struct Node;

 private:
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

}  // namespace starcalc
