#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "starcalc/expr.hpp"
#include "starcalc/set_function.hpp"

namespace starcalc {

/// C^n (n!)^delta, the weight of level n in the K_{C,delta} norm. Computed
/// directly while that is exact and finite, otherwise through log-gamma.
double growth_weight(double c, double delta, std::size_t n);
double log_growth_weight(double c, double delta, std::size_t n);

/// A per-cardinality weight w(n): head[n] for n < head.size(), otherwise
/// tail_scale * (n!)^tail_delta.
struct LevelWeights {
  std::vector<double> head;
  double tail_scale = 1.0;
  double tail_delta = 0.0;

  static LevelWeights one() { return {}; }
  static LevelWeights table(std::vector<double> w) { return {std::move(w), 0.0, 0.0}; }
  static LevelWeights factorial_power(double delta) { return {{}, 1.0, delta}; }

  double operator()(std::size_t n) const;
  bool finite_support() const noexcept { return tail_scale == 0.0; }
  /// Levels >= this value carry weight zero (only meaningful with finite support).
  std::size_t support_end() const noexcept;
  /// w(n) is the same number for every n.
  std::optional<double> constant_value() const;

  friend LevelWeights operator*(const LevelWeights& a, const LevelWeights& b);
  LevelWeights scaled(double s) const;
};

/// w(|eta|) * prod_{x in eta} factor(x).
struct LevelTerm {
  LevelWeights weights;
  Expr factor;
};

/// Sum of level terms; the closed-form shape used by all exact integrals.
using LevelExponentSum = std::vector<LevelTerm>;

/// A symmetric function on finite configurations.
class Kernel {
 public:
  enum class Family {
    LPExponent,
    ConstantLevel,
    UnitStar,
    Singleton,
    LevelWeight,
    ExtremalWitness,
    Sum,
    Product,
    Scale,
    Convolution,
    ExpStar,
    Custom,
  };

  using Callable = std::function<double(std::span<const PhasePoint>)>;

  /// prod_{x in eta} f(x).
  static Kernel lp_exponent(Expr f);
  /// c^{|eta|}.
  static Kernel constant_level(double c);
  /// 1 at the empty configuration, 0 elsewhere.
  static Kernel unit_star();
  /// sigma(x) on singletons {x}, 0 elsewhere.
  static Kernel singleton(Expr sigma);
  /// w[|eta|], zero beyond the table.
  static Kernel level_weight(std::vector<double> w);
  /// C^{|eta|} (|eta|!)^delta.
  static Kernel extremal_witness(double c, double delta);
  static Kernel sum(std::vector<Kernel> terms);
  static Kernel product(std::vector<Kernel> factors);
  static Kernel scale(double s, Kernel k);
  /// (a * b)(eta) = sum over subsets.
  static Kernel convolution(Kernel a, Kernel b);
  /// exp*(u), u vanishing at the empty configuration.
  static Kernel exp_star(Kernel u);
  /// Arbitrary callable; receives points in a canonical order.
  static Kernel custom(std::string name, Callable fn);

  Family family() const noexcept;

  /// Evaluates at the configuration {pts}. Points are sorted into a canonical
  /// order first, so the value is exactly permutation invariant.
  double operator()(std::span<const PhasePoint> pts) const;

  /// Closed form as a level-exponent sum, if the family admits one.
  std::optional<LevelExponentSum> level_form() const;

  /// Value at the empty configuration.
  double empty_value() const;

  /// Largest coordinate index referenced by expressions plus one.
  std::size_t arity() const;

  std::string describe() const;

  // Structure access (for serialization).
  const std::vector<Kernel>& children() const;
  const std::vector<Expr>& exprs() const;
  const std::vector<double>& params() const;

  struct Node;

  /// Evaluation on points already in canonical order.
  double eval_sorted(std::span<const PhasePoint> pts) const;

 private:
  explicit Kernel(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

Kernel operator+(const Kernel& a, const Kernel& b);
Kernel operator*(const Kernel& a, const Kernel& b);
Kernel operator*(double s, const Kernel& k);

/// Lexicographic order on coordinates.
bool canonical_less(const PhasePoint& a, const PhasePoint& b) noexcept;

double eval_kernel(const Kernel& k, std::span<const PhasePoint> pts);

/// values[S] = k(points selected by S).
SetFunction tabulate(const Kernel& k, GroundPtr ground);
SetFunction tabulate(const Kernel& k, const GroundConfiguration& ground);

}  // namespace starcalc
