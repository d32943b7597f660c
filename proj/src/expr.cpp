#include "starcalc/expr.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>

#include "starcalc/error.hpp"

namespace starcalc {

enum class Op { Const, Coord, Ind, Add, Sub, Mul, Div, Neg, Exp, Abs, Pow };

struct Expr::Node {
  Op op = Op::Const;
  double value = 0.0;
  std::size_t axis = 0;
  unsigned exponent = 0;
  std::vector<Interval> box;
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;

NodePtr make_const(double c) {
  auto n = std::make_shared<Expr::Node>();
  n->op = Op::Const;
  n->value = c;
  return n;
}

NodePtr make_unary(Op op, NodePtr a) {
  auto n = std::make_shared<Expr::Node>();
  n->op = op;
  n->lhs = std::move(a);
  return n;
}

NodePtr make_binary(Op op, NodePtr a, NodePtr b) {
  auto n = std::make_shared<Expr::Node>();
  n->op = op;
  n->lhs = std::move(a);
  n->rhs = std::move(b);
  return n;
}

double eval(const Expr::Node& n, std::span<const double> x) {
  switch (n.op) {
    case Op::Const: return n.value;
    case Op::Coord:
      if (n.axis >= x.size()) throw Error(ErrorCode::InvalidArgument, "expression uses an axis beyond the point dimension");
      return x[n.axis];
    case Op::Ind:
      for (std::size_t i = 0; i < n.box.size(); ++i) {
        if (i >= x.size()) throw Error(ErrorCode::InvalidArgument, "indicator uses an axis beyond the point dimension");
        if (!n.box[i].contains(x[i])) return 0.0;
      }
      return 1.0;
    case Op::Add: return eval(*n.lhs, x) + eval(*n.rhs, x);
    case Op::Sub: return eval(*n.lhs, x) - eval(*n.rhs, x);
    case Op::Mul: return eval(*n.lhs, x) * eval(*n.rhs, x);
    case Op::Div: return eval(*n.lhs, x) / eval(*n.rhs, x);
    case Op::Neg: return -eval(*n.lhs, x);
    case Op::Exp: return std::exp(eval(*n.lhs, x));
    case Op::Abs: return std::abs(eval(*n.lhs, x));
    case Op::Pow: {
      const double b = eval(*n.lhs, x);
      double r = 1.0;
      for (unsigned i = 0; i < n.exponent; ++i) r *= b;
      return r;
    }
  }
  return 0.0;
}

constexpr double kInf = std::numeric_limits<double>::infinity();

Interval mul(Interval a, Interval b) {
  const double p[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
  double lo = kInf, hi = -kInf;
  for (double v : p) {
    if (std::isnan(v)) v = 0.0;  // 0 * inf inside an enclosure
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return {lo, hi};
}

Interval ipow(Interval a, unsigned e) {
  if (e == 0) return {1.0, 1.0};
  const double plo = std::pow(a.lo, e), phi = std::pow(a.hi, e);
  if (e % 2 == 1) return {plo, phi};
  if (a.lo >= 0) return {plo, phi};
  if (a.hi <= 0) return {phi, plo};
  return {0.0, std::max(plo, phi)};
}

Interval enclose(const Expr::Node& n, const Box& box) {
  switch (n.op) {
    case Op::Const: return {n.value, n.value};
    case Op::Coord:
      if (n.axis >= box.dim()) throw Error(ErrorCode::InvalidArgument, "expression uses an axis beyond the box dimension");
      return box.axis(n.axis);
    case Op::Ind: {
      bool inside = true;
      for (std::size_t i = 0; i < n.box.size(); ++i) {
        if (i >= box.dim()) throw Error(ErrorCode::InvalidArgument, "indicator uses an axis beyond the box dimension");
        const auto& a = box.axis(i);
        if (a.hi < n.box[i].lo || a.lo > n.box[i].hi) return {0.0, 0.0};
        if (a.lo < n.box[i].lo || a.hi > n.box[i].hi) inside = false;
      }
      return inside ? Interval{1.0, 1.0} : Interval{0.0, 1.0};
    }
    case Op::Add: {
      auto a = enclose(*n.lhs, box), b = enclose(*n.rhs, box);
      return {a.lo + b.lo, a.hi + b.hi};
    }
    case Op::Sub: {
      auto a = enclose(*n.lhs, box), b = enclose(*n.rhs, box);
      return {a.lo - b.hi, a.hi - b.lo};
    }
    case Op::Mul: return mul(enclose(*n.lhs, box), enclose(*n.rhs, box));
    case Op::Div: {
      auto a = enclose(*n.lhs, box), b = enclose(*n.rhs, box);
      if (b.lo <= 0.0 && b.hi >= 0.0) return {-kInf, kInf};
      return mul(a, {1.0 / b.hi, 1.0 / b.lo});
    }
    case Op::Neg: {
      auto a = enclose(*n.lhs, box);
      return {-a.hi, -a.lo};
    }
    case Op::Exp: {
      auto a = enclose(*n.lhs, box);
      return {std::exp(a.lo), std::exp(a.hi)};
    }
    case Op::Abs: {
      auto a = enclose(*n.lhs, box);
      if (a.lo >= 0) return a;
      if (a.hi <= 0) return {-a.hi, -a.lo};
      return {0.0, std::max(-a.lo, a.hi)};
    }
    case Op::Pow: return ipow(enclose(*n.lhs, box), n.exponent);
  }
  return {-kInf, kInf};
}

void breakpoints(const Expr::Node& n, std::size_t axis, std::vector<double>& out) {
  if (n.op == Op::Ind && axis < n.box.size()) {
    out.push_back(n.box[axis].lo);
    out.push_back(n.box[axis].hi);
  }
  if (n.lhs) breakpoints(*n.lhs, axis, out);
  if (n.rhs) breakpoints(*n.rhs, axis, out);
}

std::size_t arity_of(const Expr::Node& n) {
  std::size_t a = 0;
  if (n.op == Op::Coord) a = n.axis + 1;
  if (n.op == Op::Ind) a = n.box.size();
  if (n.lhs) a = std::max(a, arity_of(*n.lhs));
  if (n.rhs) a = std::max(a, arity_of(*n.rhs));
  return a;
}

std::string number(double v, bool wrap_negative = true) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s(buf);
  if (wrap_negative && v < 0) return "(" + s + ")";
  return s;
}

std::string print(const Expr::Node& n) {
  switch (n.op) {
    case Op::Const: return number(n.value);
    case Op::Coord: return "x" + std::to_string(n.axis);
    case Op::Ind: {
      std::string s = "ind(";
      for (std::size_t i = 0; i < n.box.size(); ++i) {
        if (i) s += ",";
        s += number(n.box[i].lo, false) + "," + number(n.box[i].hi, false);
      }
      return s + ")";
    }
    case Op::Add: return "(" + print(*n.lhs) + " + " + print(*n.rhs) + ")";
    case Op::Sub: return "(" + print(*n.lhs) + " - " + print(*n.rhs) + ")";
    case Op::Mul: return "(" + print(*n.lhs) + " * " + print(*n.rhs) + ")";
    case Op::Div: return "(" + print(*n.lhs) + " / " + print(*n.rhs) + ")";
    case Op::Neg: return "(-" + print(*n.lhs) + ")";
    case Op::Exp: return "exp(" + print(*n.lhs) + ")";
    case Op::Abs: return "abs(" + print(*n.lhs) + ")";
    case Op::Pow: return "(" + print(*n.lhs) + ")^" + std::to_string(n.exponent);
  }
  return "?";
}

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  Expr parse_all() {
    Expr e = expr();
    skip();
    if (pos_ != s_.size()) fail("trailing characters");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorCode::ParseError, msg + " at offset " + std::to_string(pos_) + " in '" + std::string(s_) + "'");
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

  bool accept_word(std::string_view w) {
    skip();
    if (s_.substr(pos_, w.size()) == w) {
      pos_ += w.size();
      return true;
    }
    return false;
  }

  double literal() {
    skip();
    bool neg = false;
    if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) {
      neg = s_[pos_] == '-';
      ++pos_;
    }
    skip();
    double v = 0.0;
    const char* begin = s_.data() + pos_;
    auto [ptr, ec] = std::from_chars(begin, s_.data() + s_.size(), v);
    if (ec != std::errc() || ptr == begin) fail("expected a number");
    pos_ += static_cast<std::size_t>(ptr - begin);
    return neg ? -v : v;
  }

  std::size_t index() {
    skip();
    std::size_t v = 0;
    const char* begin = s_.data() + pos_;
    auto [ptr, ec] = std::from_chars(begin, s_.data() + s_.size(), v);
    if (ec != std::errc() || ptr == begin) fail("expected an integer");
    pos_ += static_cast<std::size_t>(ptr - begin);
    return v;
  }

  Expr expr() {
    Expr e = term();
    for (;;) {
      if (accept('+')) e = e + term();
      else if (accept('-')) e = e - term();
      else return e;
    }
  }

  Expr term() {
    Expr e = unary();
    for (;;) {
      if (accept('*')) e = e * unary();
      else if (accept('/')) e = e / unary();
      else return e;
    }
  }

  Expr unary() {
    if (accept('-')) return -unary();
    return power();
  }

  Expr power() {
    Expr base = primary();
    if (accept('^')) {
      const std::size_t e = index();
      if (e > 64) fail("exponent too large");
      return pow(base, static_cast<unsigned>(e));
    }
    return base;
  }

  Expr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of expression");
    const char c = s_[pos_];
    if (accept('(')) {
      Expr e = expr();
      expect(')');
      return e;
    }
    if (accept_word("exp(")) {
      Expr e = expr();
      expect(')');
      return exp(e);
    }
    if (accept_word("abs(")) {
      Expr e = expr();
      expect(')');
      return abs(e);
    }
    if (accept_word("ind(")) {
      std::vector<Interval> box;
      do {
        const double lo = literal();
        expect(',');
        const double hi = literal();
        if (!(lo <= hi)) fail("indicator bounds need lo <= hi");
        box.push_back({lo, hi});
      } while (accept(','));
      expect(')');
      return Expr::indicator(std::move(box));
    }
    if (c == 'x') {
      ++pos_;
      if (accept('[')) {
        const std::size_t i = index();
        expect(']');
        return Expr::coord(i);
      }
      return Expr::coord(index());
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return Expr::constant(literal());
    fail("unexpected character");
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr::Expr() : node_(make_const(0.0)) {}

Expr Expr::constant(double c) {
  if (!std::isfinite(c)) throw Error(ErrorCode::InvalidArgument, "expression constants must be finite");
  return Expr(make_const(c));
}

Expr Expr::coord(std::size_t axis) {
  auto n = std::make_shared<Node>();
  n->op = Op::Coord;
  n->axis = axis;
  return Expr(n);
}

Expr Expr::indicator(std::vector<Interval> sub_box) {
  if (sub_box.empty()) throw Error(ErrorCode::InvalidArgument, "indicator needs at least one axis");
  auto n = std::make_shared<Node>();
  n->op = Op::Ind;
  n->box = std::move(sub_box);
  return Expr(n);
}

Expr Expr::parse(std::string_view text) { return Parser(text).parse_all(); }

Expr operator+(const Expr& a, const Expr& b) {
  auto ca = a.constant_value(), cb = b.constant_value();
  if (ca && cb) return Expr::constant(*ca + *cb);
  if (ca && *ca == 0.0) return b;
  if (cb && *cb == 0.0) return a;
  return Expr(make_binary(Op::Add, a.node_, b.node_));
}

Expr operator-(const Expr& a, const Expr& b) {
  auto ca = a.constant_value(), cb = b.constant_value();
  if (ca && cb) return Expr::constant(*ca - *cb);
  if (cb && *cb == 0.0) return a;
  return Expr(make_binary(Op::Sub, a.node_, b.node_));
}

Expr operator*(const Expr& a, const Expr& b) {
  auto ca = a.constant_value(), cb = b.constant_value();
  if (ca && cb) return Expr::constant(*ca * *cb);
  if ((ca && *ca == 1.0)) return b;
  if ((cb && *cb == 1.0)) return a;
  return Expr(make_binary(Op::Mul, a.node_, b.node_));
}

Expr operator/(const Expr& a, const Expr& b) {
  auto ca = a.constant_value(), cb = b.constant_value();
  if (ca && cb && *cb != 0.0) return Expr::constant(*ca / *cb);
  if (cb && *cb == 1.0) return a;
  return Expr(make_binary(Op::Div, a.node_, b.node_));
}

Expr operator-(const Expr& a) {
  if (auto c = a.constant_value()) return Expr::constant(-*c);
  return Expr(make_unary(Op::Neg, a.node_));
}

Expr exp(const Expr& a) {
  if (auto c = a.constant_value()) return Expr::constant(std::exp(*c));
  return Expr(make_unary(Op::Exp, a.node_));
}

Expr abs(const Expr& a) {
  if (auto c = a.constant_value()) return Expr::constant(std::abs(*c));
  return Expr(make_unary(Op::Abs, a.node_));
}

Expr pow(const Expr& a, unsigned exponent) {
  if (auto c = a.constant_value()) return Expr::constant(std::pow(*c, exponent));
  auto n = std::make_shared<Expr::Node>();
  n->op = Op::Pow;
  n->lhs = a.node_;
  n->exponent = exponent;
  return Expr(n);
}

double Expr::operator()(std::span<const double> x) const { return eval(*node_, x); }

Interval Expr::bound(const Box& box) const { return enclose(*node_, box); }

void Expr::collect_breakpoints(std::size_t axis, std::vector<double>& out) const {
  breakpoints(*node_, axis, out);
}

std::size_t Expr::arity() const { return arity_of(*node_); }

std::optional<double> Expr::constant_value() const {
  if (node_->op == Op::Const) return node_->value;
  return std::nullopt;
}

std::string Expr::to_string() const { return print(*node_); }

}  // namespace starcalc
