#include "starcalc/kernel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "starcalc/calculus.hpp"
#include "starcalc/error.hpp"

namespace starcalc {

namespace {

constexpr std::size_t kExactFactorials = 21;  // 0! .. 20! are exact doubles

const std::array<double, kExactFactorials>& factorials() {
  static const auto table = [] {
    std::array<double, kExactFactorials> f{};
    f[0] = 1.0;
    for (std::size_t i = 1; i < kExactFactorials; ++i) f[i] = f[i - 1] * static_cast<double>(i);
    return f;
  }();
  return table;
}

std::string fmt_num(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

double log_growth_weight(double c, double delta, std::size_t n) {
  if (n == 0) return 0.0;
  const double nd = static_cast<double>(n);
  return nd * std::log(c) + delta * std::lgamma(nd + 1.0);
}

double growth_weight(double c, double delta, std::size_t n) {
  if (n == 0) return 1.0;
  if (n < kExactFactorials) {
    const double f = factorials()[n];
    const double fd = delta == 0.0 ? 1.0 : (delta == 1.0 ? f : std::pow(f, delta));
    const double v = std::pow(c, static_cast<double>(n)) * fd;
    if (std::isfinite(v) && v > 0.0) return v;
  }
  return std::exp(log_growth_weight(c, delta, n));
}

double LevelWeights::operator()(std::size_t n) const {
  if (n < head.size()) return head[n];
  if (tail_scale == 0.0) return 0.0;
  return tail_scale * growth_weight(1.0, tail_delta, n);
}

std::size_t LevelWeights::support_end() const noexcept {
  std::size_t end = head.size();
  while (end > 0 && head[end - 1] == 0.0) --end;
  return end;
}

std::optional<double> LevelWeights::constant_value() const {
  if (tail_delta != 0.0) return std::nullopt;
  for (double h : head) {
    if (h != tail_scale) return std::nullopt;
  }
  return tail_scale;
}

LevelWeights operator*(const LevelWeights& a, const LevelWeights& b) {
  LevelWeights r;
  r.head.resize(std::max(a.head.size(), b.head.size()));
  for (std::size_t n = 0; n < r.head.size(); ++n) r.head[n] = a(n) * b(n);
  r.tail_scale = a.tail_scale * b.tail_scale;
  r.tail_delta = r.tail_scale == 0.0 ? 0.0 : a.tail_delta + b.tail_delta;
  return r;
}

LevelWeights LevelWeights::scaled(double s) const {
  LevelWeights r = *this;
  for (double& h : r.head) h *= s;
  r.tail_scale *= s;
  if (r.tail_scale == 0.0) r.tail_delta = 0.0;
  return r;
}

struct Kernel::Node {
  Family family;
  std::vector<Kernel> children;
  std::vector<Expr> exprs;
  std::vector<double> params;
  std::string name;
  Callable fn;
};

namespace {

std::shared_ptr<Kernel::Node> node(Kernel::Family f) {
  auto n = std::make_shared<Kernel::Node>();
  n->family = f;
  return n;
}

// Values of k on every subset of an already sorted point list.
std::vector<double> tabulate_sorted(const Kernel& k, std::span<const PhasePoint> pts) {
  if (pts.size() > GroundConfiguration::kMaxPoints) {
    throw Error(ErrorCode::TooLarge, "configuration too large for subset enumeration");
  }
  const std::size_t size = std::size_t{1} << pts.size();
  std::vector<double> v(size);
  std::vector<PhasePoint> sel;
  for (std::size_t m = 0; m < size; ++m) {
    sel.clear();
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (m >> i & 1u) sel.push_back(pts[i]);
    }
    v[m] = k.eval_sorted(sel);
  }
  return v;
}

}  // namespace

Kernel Kernel::lp_exponent(Expr f) {
  auto n = node(Family::LPExponent);
  n->exprs = {std::move(f)};
  return Kernel(std::move(n));
}

Kernel Kernel::constant_level(double c) {
  if (!std::isfinite(c)) throw Error(ErrorCode::InvalidArgument, "constant level value must be finite");
  auto n = node(Family::ConstantLevel);
  n->params = {c};
  return Kernel(std::move(n));
}

Kernel Kernel::unit_star() { return Kernel(node(Family::UnitStar)); }

Kernel Kernel::singleton(Expr sigma) {
  auto n = node(Family::Singleton);
  n->exprs = {std::move(sigma)};
  return Kernel(std::move(n));
}

Kernel Kernel::level_weight(std::vector<double> w) {
  for (double x : w) {
    if (!std::isfinite(x)) throw Error(ErrorCode::InvalidArgument, "level weights must be finite");
  }
  auto n = node(Family::LevelWeight);
  n->params = std::move(w);
  return Kernel(std::move(n));
}

Kernel Kernel::extremal_witness(double c, double delta) {
  if (!(c > 0.0) || !(delta >= 0.0) || !std::isfinite(c) || !std::isfinite(delta)) {
    throw Error(ErrorCode::InvalidArgument, "extremal witness needs C > 0 and delta >= 0");
  }
  auto n = node(Family::ExtremalWitness);
  n->params = {c, delta};
  return Kernel(std::move(n));
}

Kernel Kernel::sum(std::vector<Kernel> terms) {
  auto n = node(Family::Sum);
  n->children = std::move(terms);
  return Kernel(std::move(n));
}

Kernel Kernel::product(std::vector<Kernel> factors) {
  auto n = node(Family::Product);
  n->children = std::move(factors);
  return Kernel(std::move(n));
}

Kernel Kernel::scale(double s, Kernel k) {
  if (!std::isfinite(s)) throw Error(ErrorCode::InvalidArgument, "scale factor must be finite");
  auto n = node(Family::Scale);
  n->params = {s};
  n->children = {std::move(k)};
  return Kernel(std::move(n));
}

Kernel Kernel::convolution(Kernel a, Kernel b) {
  auto n = node(Family::Convolution);
  n->children = {std::move(a), std::move(b)};
  return Kernel(std::move(n));
}

Kernel Kernel::exp_star(Kernel u) {
  auto n = node(Family::ExpStar);
  n->children = {std::move(u)};
  return Kernel(std::move(n));
}

Kernel Kernel::custom(std::string name, Callable fn) {
  if (!fn) throw Error(ErrorCode::InvalidArgument, "custom kernel needs a callable");
  auto n = node(Family::Custom);
  n->name = std::move(name);
  n->fn = std::move(fn);
  return Kernel(std::move(n));
}

Kernel::Family Kernel::family() const noexcept { return node_->family; }
const std::vector<Kernel>& Kernel::children() const { return node_->children; }
const std::vector<Expr>& Kernel::exprs() const { return node_->exprs; }
const std::vector<double>& Kernel::params() const { return node_->params; }

bool canonical_less(const PhasePoint& a, const PhasePoint& b) noexcept {
  return std::lexicographical_compare(a.coords.begin(), a.coords.end(), b.coords.begin(), b.coords.end());
}

double Kernel::operator()(std::span<const PhasePoint> pts) const {
  std::vector<PhasePoint> sorted(pts.begin(), pts.end());
  std::sort(sorted.begin(), sorted.end(), canonical_less);
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i] == sorted[i - 1]) throw Error(ErrorCode::DuplicatePoint, "configuration contains a repeated point");
  }
  return eval_sorted(sorted);
}

double Kernel::eval_sorted(std::span<const PhasePoint> pts) const {
  const Node& nd = *node_;
  const std::size_t n = pts.size();
  switch (nd.family) {
    case Family::LPExponent: {
      double v = 1.0;
      for (const auto& p : pts) v *= nd.exprs[0](p.coords);
      return v;
    }
    case Family::ConstantLevel: {
      double v = 1.0;
      for (std::size_t i = 0; i < n; ++i) v *= nd.params[0];
      return v;
    }
    case Family::UnitStar:
      return n == 0 ? 1.0 : 0.0;
    case Family::Singleton:
      return n == 1 ? nd.exprs[0](pts[0].coords) : 0.0;
    case Family::LevelWeight:
      return n < nd.params.size() ? nd.params[n] : 0.0;
    case Family::ExtremalWitness:
      return growth_weight(nd.params[0], nd.params[1], n);
    case Family::Sum: {
      double v = 0.0;
      for (const auto& c : nd.children) v += c.eval_sorted(pts);
      return v;
    }
    case Family::Product: {
      double v = 1.0;
      for (const auto& c : nd.children) v *= c.eval_sorted(pts);
      return v;
    }
    case Family::Scale:
      return nd.params[0] * nd.children[0].eval_sorted(pts);
    case Family::Convolution: {
      const auto a = tabulate_sorted(nd.children[0], pts);
      const auto b = tabulate_sorted(nd.children[1], pts);
      const std::size_t full = a.size() - 1;
      double v = 0.0;
      for (std::size_t sub = full;; sub = (sub - 1) & full) {
        v += a[sub] * b[full ^ sub];
        if (sub == 0) break;
      }
      return v;
    }
    case Family::ExpStar: {
      const auto u = tabulate_sorted(nd.children[0], pts);
      if (u[0] != 0.0) throw Error(ErrorCode::NotInIdeal, "exp* kernel needs u(empty) = 0");
      const auto e = series_values(exp_coefficients(n), u, static_cast<unsigned>(n));
      return e.back();
    }
    case Family::Custom:
      return nd.fn(pts);
  }
  return 0.0;
}

double Kernel::empty_value() const { return eval_sorted({}); }

std::size_t Kernel::arity() const {
  std::size_t a = 0;
  for (const auto& e : node_->exprs) a = std::max(a, e.arity());
  for (const auto& c : node_->children) a = std::max(a, c.arity());
  return a;
}

std::optional<LevelExponentSum> Kernel::level_form() const {
  const Node& nd = *node_;
  const Expr one = Expr::constant(1.0);
  switch (nd.family) {
    case Family::LPExponent:
      return LevelExponentSum{{LevelWeights::one(), nd.exprs[0]}};
    case Family::ConstantLevel:
      return LevelExponentSum{{LevelWeights::one(), Expr::constant(nd.params[0])}};
    case Family::UnitStar:
      return LevelExponentSum{{LevelWeights::table({1.0}), one}};
    case Family::Singleton:
      return LevelExponentSum{{LevelWeights::table({0.0, 1.0}), nd.exprs[0]}};
    case Family::LevelWeight:
      return LevelExponentSum{{LevelWeights::table(nd.params), one}};
    case Family::ExtremalWitness:
      return LevelExponentSum{{LevelWeights::factorial_power(nd.params[1]), Expr::constant(nd.params[0])}};
    case Family::Sum: {
      LevelExponentSum out;
      for (const auto& c : nd.children) {
        auto f = c.level_form();
        if (!f) return std::nullopt;
        out.insert(out.end(), f->begin(), f->end());
      }
      return out;
    }
    case Family::Product: {
      LevelExponentSum acc{{LevelWeights::one(), one}};
      for (const auto& c : nd.children) {
        auto f = c.level_form();
        if (!f) return std::nullopt;
        LevelExponentSum next;
        for (const auto& a : acc) {
          for (const auto& b : *f) next.push_back({a.weights * b.weights, a.factor * b.factor});
        }
        acc = std::move(next);
      }
      return acc;
    }
    case Family::Scale: {
      auto f = nd.children[0].level_form();
      if (!f) return std::nullopt;
      for (auto& t : *f) t.weights = t.weights.scaled(nd.params[0]);
      return f;
    }
    case Family::Convolution: {
      auto fa = nd.children[0].level_form();
      auto fb = nd.children[1].level_form();
      if (!fa || !fb) return std::nullopt;
      LevelExponentSum out;
      for (const auto& a : *fa) {
        for (const auto& b : *fb) {
          const auto ca = a.weights.constant_value();
          const auto cb = b.weights.constant_value();
          if (ca && cb) {
            out.push_back({LevelWeights::one().scaled(*ca * *cb), a.factor + b.factor});
          } else if (a.weights.finite_support() && a.weights.support_end() <= 1) {
            out.push_back({b.weights.scaled(a.weights(0)), b.factor});
          } else if (b.weights.finite_support() && b.weights.support_end() <= 1) {
            out.push_back({a.weights.scaled(b.weights(0)), a.factor});
          } else {
            return std::nullopt;
          }
        }
      }
      return out;
    }
    case Family::ExpStar: {
      // exp* of a singleton field is the exponent of that field.
      auto fu = nd.children[0].level_form();
      if (!fu) return std::nullopt;
      Expr field = Expr::constant(0.0);
      for (const auto& t : *fu) {
        if (!t.weights.finite_support() || t.weights.support_end() > 2 || t.weights(0) != 0.0) return std::nullopt;
        field = field + Expr::constant(t.weights(1)) * t.factor;
      }
      return LevelExponentSum{{LevelWeights::one(), field}};
    }
    case Family::Custom:
      return std::nullopt;
  }
  return std::nullopt;
}

std::string Kernel::describe() const {
  const Node& nd = *node_;
  auto join = [&](const char* head) {
    std::string s = head;
    s += '(';
    for (std::size_t i = 0; i < nd.children.size(); ++i) {
      if (i) s += ", ";
      s += nd.children[i].describe();
    }
    return s + ')';
  };
  switch (nd.family) {
    case Family::LPExponent: return "lp_exponent(" + nd.exprs[0].to_string() + ")";
    case Family::ConstantLevel: return "constant_level(" + fmt_num(nd.params[0]) + ")";
    case Family::UnitStar: return "unit_star";
    case Family::Singleton: return "singleton(" + nd.exprs[0].to_string() + ")";
    case Family::LevelWeight: {
      std::string s = "level_weight(";
      for (std::size_t i = 0; i < nd.params.size(); ++i) s += (i ? ", " : "") + fmt_num(nd.params[i]);
      return s + ")";
    }
    case Family::ExtremalWitness:
      return "extremal_witness(" + fmt_num(nd.params[0]) + ", " + fmt_num(nd.params[1]) + ")";
    case Family::Sum: return join("sum");
    case Family::Product: return join("product");
    case Family::Scale: return "scale(" + fmt_num(nd.params[0]) + ", " + nd.children[0].describe() + ")";
    case Family::Convolution: return join("convolution");
    case Family::ExpStar: return join("exp_star");
    case Family::Custom: return "custom(" + nd.name + ")";
  }
  return "?";
}

Kernel operator+(const Kernel& a, const Kernel& b) { return Kernel::sum({a, b}); }
Kernel operator*(const Kernel& a, const Kernel& b) { return Kernel::product({a, b}); }
Kernel operator*(double s, const Kernel& k) { return Kernel::scale(s, k); }

double eval_kernel(const Kernel& k, std::span<const PhasePoint> pts) { return k(pts); }

SetFunction tabulate(const Kernel& k, GroundPtr ground) {
  const std::size_t n = ground->size();
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return canonical_less(ground->point(a), ground->point(b)); });
  std::vector<double> v(ground->subset_count());
  std::vector<PhasePoint> sel;
  for (std::size_t m = 0; m < v.size(); ++m) {
    sel.clear();
    for (std::size_t i : order) {
      if (m >> i & 1u) sel.push_back(ground->point(i));
    }
    v[m] = k.eval_sorted(sel);
  }
  return SetFunction(std::move(ground), std::move(v));
}

SetFunction tabulate(const Kernel& k, const GroundConfiguration& ground) {
  return tabulate(k, std::make_shared<const GroundConfiguration>(ground));
}

}  // namespace starcalc
