// starcalc: command-line front end for the set-function calculus library.
#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "starcalc/calculus.hpp"
#include "starcalc/error.hpp"
#include "starcalc/evolution.hpp"
#include "starcalc/io.hpp"
#include "starcalc/lebesgue_poisson.hpp"
#include "starcalc/norms.hpp"
#include "starcalc/posdef.hpp"
#include "starcalc/random_inputs.hpp"
#include "starcalc/transforms.hpp"
#include "starcalc/verify.hpp"

using namespace starcalc;

namespace {

constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kUsage = 2;

struct Common {
  std::string config;
  std::uint64_t seed = 1;
  std::size_t samples = 100000;
  double tol = 1e-8;
  unsigned n = 10;
  std::string out;
  std::string format = "json";
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--config", c.config, "JSON run configuration");
  app->add_option("--seed", c.seed, "Master seed");
  app->add_option("--samples", c.samples, "Monte Carlo samples");
  app->add_option("--tol", c.tol, "Tolerance for pass/fail decisions");
  app->add_option("--n", c.n, "Ground size (or size cap)");
  app->add_option("--out", c.out, "Write results here instead of stdout");
  app->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
}

void emit(const Common& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream f(c.out);
  if (!f) throw Error(ErrorCode::InvalidArgument, "cannot write " + c.out);
  f << text;
  if (!text.empty() && text.back() != '\n') f << '\n';
}

void emit(const Common& c, const Json& j) { emit(c, j.dump(2)); }

Json config_of(const Common& c) {
  if (c.config.empty()) return Json::object();
  Json j = read_json_file(c.config);
  if (!j.is_object()) throw Error(ErrorCode::ParseError, "configuration must be a JSON object");
  return j;
}

const Json& need(const Json& cfg, const char* key) {
  if (!cfg.contains(key)) throw Error(ErrorCode::ParseError, std::string("configuration lacks \"") + key + "\"");
  return cfg.at(key);
}

/// {"ground", "values"} or {"ground", "kernel"}; a string is read as a file path.
SetFunction load_set_function(const Json& j) {
  if (j.is_string()) return load_set_function(read_json_file(j.get<std::string>()));
  if (j.contains("kernel")) {
    return tabulate(kernel_from_json(j.at("kernel")), ground_from_json(need(j, "ground")));
  }
  return set_function_from_json(j);
}

Json load_ref(const std::string& path_or_empty, const Json& cfg, const char* key) {
  if (!path_or_empty.empty()) return read_json_file(path_or_empty);
  return need(cfg, key);
}

Json common_json(const Common& c) {
  return Json{{"seed", c.seed}, {"samples", c.samples}, {"tol", c.tol}, {"n", c.n}};
}

Json estimate_json(const IntegralEstimate& e) {
  return Json{{"value", e.value},   {"stderr", e.std_error}, {"samples", e.samples},
              {"exact", e.exact},   {"seed", e.seed},        {"normalization", e.normalization}};
}

Json identity_json(const IdentityReport& r) {
  Json j{{"lhs", estimate_json(r.lhs)},
         {"rhs", estimate_json(r.rhs)},
         {"deviation", r.deviation},
         {"sigma", r.sigma},
         {"overlap_violations", r.overlap_violations}};
  j["closed_lhs"] = r.closed_lhs ? Json(*r.closed_lhs) : Json(nullptr);
  j["closed_rhs"] = r.closed_rhs ? Json(*r.closed_rhs) : Json(nullptr);
  return j;
}

Json gram_json(const GramReport& r) {
  return Json{{"matrix", r.matrix},         {"integration_stderr", r.integration_stderr},
              {"eigenvalues", r.eigenvalues}, {"min_eig", r.min_eig},
              {"tol", r.tol},               {"psd", r.psd},
              {"exact", r.exact},           {"max_asymmetry", r.max_asymmetry},
              {"verdict", r.verdict}};
}

Box window_of(const Json& cfg, const PhaseSpace& space) {
  return cfg.contains("window") ? box_from_json(cfg.at("window")) : space.box();
}

// ---- subcommands ----------------------------------------------------------

int run_conv(const Common& c, const std::string& k1p, const std::string& k2p, const std::string& mode) {
  const Json cfg = config_of(c);
  const SetFunction k1 = load_set_function(load_ref(k1p, cfg, "k1"));
  SetFunction k2 = load_set_function(load_ref(k2p, cfg, "k2"));
  Json out{{"config", {{"mode", mode}, {"common", common_json(c)}}}};
  std::optional<SetFunction> shown;
  if (mode == "naive" || mode == "both") {
    shown = conv_naive(k1, k2);
    out["naive"] = to_json(*shown);
  }
  if (mode == "fast" || mode == "both") {
    const SetFunction f = conv_fast(k1, k2);
    if (shown) out["max_deviation"] = max_abs_diff(f, *shown);
    out["fast"] = to_json(f);
    shown = f;
  }
  if (mode == "star") {
    shown = star_fast(k1, k2);
    out["star"] = to_json(*shown);
  }
  if (c.format == "csv") {
    emit(c, to_csv(*shown));
  } else {
    emit(c, out);
  }
  if (out.contains("max_deviation") && out["max_deviation"].get<double>() > c.tol) return kCheckFailed;
  return kOk;
}

int run_calculus(const Common& c, const std::string& kp, const std::string& op, std::size_t index, unsigned power) {
  const Json cfg = config_of(c);
  const SetFunction k = load_set_function(load_ref(kp, cfg, "k"));
  SetFunction r = k;
  if (op == "exp") r = exp_star(k);
  else if (op == "ln") r = ln_star(k);
  else if (op == "inv") r = inv_star(k);
  else if (op == "power") r = star_power(k, power);
  else if (op == "dx") r = d_x(k, index);
  else if (op == "number") r = number_op(k);
  else if (op == "zeta") r = zeta(k);
  else if (op == "mobius") r = mobius(k);
  else throw Error(ErrorCode::InvalidArgument, "unknown operation \"" + op + "\"");
  if (c.format == "csv") {
    emit(c, to_csv(r));
  } else {
    emit(c, Json{{"config", {{"op", op}, {"index", index}, {"power", power}}}, {"result", to_json(r)}});
  }
  return kOk;
}

int run_evolve(const Common& c, const std::string& ap, const std::string& kp, double t_max, double dt, std::size_t max_terms) {
  const Json cfg = config_of(c);
  const SetFunction a = load_set_function(load_ref(ap, cfg, "a"));
  SetFunction k0 = load_set_function(load_ref(kp, cfg, "k0"));
  if (!(dt > 0.0)) throw Error(ErrorCode::InvalidArgument, "--dt must be positive");
  const auto steps = static_cast<std::size_t>(std::floor(t_max / dt + 1e-9));
  Json series = Json::array();
  std::ostringstream csv;
  csv << "t,mask,value\n";
  for (std::size_t i = 0; i <= steps; ++i) {
    const double t = static_cast<double>(i) * dt;
    const EvolutionResult r = evolve(a, k0, t, max_terms);
    const std::vector<double> values(r.solution.values().begin(), r.solution.values().end());
    series.push_back({{"t", t}, {"values", values}, {"tail_bound", r.tail_bound}, {"terms", r.truncation_terms}});
    for (std::size_t m = 0; m < values.size(); ++m) csv << format_double(t) << ',' << m << ',' << format_double(values[m]) << '\n';
  }
  if (c.format == "csv") {
    emit(c, csv.str());
  } else {
    emit(c, Json{{"config", {{"t_max", t_max}, {"dt", dt}, {"max_terms", max_terms}}},
                 {"ground", to_json(a.ground())},
                 {"series", series}});
  }
  return kOk;
}

int run_resolvent(const Common& c, const std::string& ap, const std::string& kp, double z, std::size_t max_terms,
                  double margin) {
  const Json cfg = config_of(c);
  const SetFunction a = load_set_function(load_ref(ap, cfg, "a"));
  SetFunction k = load_set_function(load_ref(kp, cfg, "k"));
  const ResolventResult r = resolvent(a, k, z, {max_terms, margin});
  if (c.format == "csv") {
    emit(c, to_csv(r.solution));
  } else {
    emit(c, Json{{"config", {{"z", z}, {"max_terms", max_terms}, {"margin", margin}, {"tol", c.tol}}},
                 {"solution", to_json(r.solution)},
                 {"terms", r.terms},
                 {"residual", r.residual}});
  }
  return r.residual <= c.tol ? kOk : kCheckFailed;
}

Method method_of(const std::string& m) {
  if (m == "auto") return Method::Auto;
  if (m == "closed") return Method::ClosedForm;
  if (m == "mc") return Method::MonteCarlo;
  throw Error(ErrorCode::InvalidArgument, "unknown method \"" + m + "\"");
}

int run_integrate(const Common& c, const std::string& method) {
  const Json cfg = config_of(c);
  const PhaseSpace space = phase_space_from_json(need(cfg, "space"));
  const Box window = window_of(cfg, space);
  const Kernel k = kernel_from_json(need(cfg, "kernel"));
  Json out{{"config", cfg}, {"method", method}, {"common", common_json(c)}};
  const Method m = method_of(method);
  if (m != Method::MonteCarlo) {
    if (auto v = integrate_closed(k, space, window)) out["closed"] = *v;
  }
  if (m != Method::ClosedForm) out["monte_carlo"] = estimate_json(integrate_mc(k, space, window, c.samples, c.seed));
  if (m == Method::ClosedForm && !out.contains("closed")) {
    throw Error(ErrorCode::InvalidArgument, "no closed form for " + k.describe());
  }
  emit(c, out);
  return kOk;
}

int run_bogolyubov(const Common& c, const std::string& method) {
  const Json cfg = config_of(c);
  const PhaseSpace space = phase_space_from_json(need(cfg, "space"));
  const Box window = window_of(cfg, space);
  const Kernel k = kernel_from_json(need(cfg, "kernel"));
  const Json& fj = need(cfg, "f");
  const Expr f = fj.is_number() ? Expr::constant(fj.get<double>()) : Expr::parse(fj.get<std::string>());
  BogolyubovOptions opt;
  opt.method = method_of(method);
  opt.samples = c.samples;
  opt.seed = c.seed;
  if (cfg.contains("growth")) opt.growth = {need(cfg["growth"], "C").get<double>(), need(cfg["growth"], "delta").get<double>()};
  Json out{{"config", cfg}, {"method", method}, {"common", common_json(c)}};
  out["value"] = estimate_json(bogolyubov(k, f, space, window, opt));
  int code = kOk;
  if (cfg.value("positivity", false)) {
    const PositivityReport r = bogolyubov_positivity_check(k, f, space, window, opt);
    out["positivity"] = {{"functional", estimate_json(r.functional)},
                         {"cumulant_value", r.cumulant_value},
                         {"exp_cumulant", r.exp_cumulant},
                         {"relative_deviation", r.relative_deviation},
                         {"positive", r.positive}};
    if (!r.positive) code = kCheckFailed;
  }
  emit(c, out);
  return code;
}

int run_minlos(const Common& c) {
  const Json cfg = config_of(c);
  const PhaseSpace space = phase_space_from_json(need(cfg, "space"));
  const Box window = window_of(cfg, space);
  const IdentityReport r = minlos_check(kernel_from_json(need(cfg, "h")), kernel_from_json(need(cfg, "g1")),
                                        kernel_from_json(need(cfg, "g2")), space, window, c.samples, c.seed);
  const bool ok = r.within(3.0, c.tol);
  emit(c, Json{{"config", cfg}, {"common", common_json(c)}, {"report", identity_json(r)}, {"within_3_sigma", ok}});
  return ok ? kOk : kCheckFailed;
}

int run_measure_conv(const Common& c) {
  const Json cfg = config_of(c);
  const PhaseSpace space = phase_space_from_json(need(cfg, "space"));
  const Box window = window_of(cfg, space);
  const MeasureConvolutionReport r =
      measure_convolution_check(kernel_from_json(need(cfg, "k1")), kernel_from_json(need(cfg, "k2")),
                                kernel_from_json(need(cfg, "g")), space, window, c.samples, c.seed);
  const bool ok = r.identity.within(3.0, c.tol);
  emit(c, Json{{"config", cfg},
               {"common", common_json(c)},
               {"report", identity_json(r.identity)},
               {"window_mass", estimate_json(r.window_mass)},
               {"window_mass_finite", r.window_mass_finite},
               {"within_3_sigma", ok}});
  return ok ? kOk : kCheckFailed;
}

int run_young(const Common& c, const std::string& variant, const YoungParams& yp, const PowerParams& pp) {
  const YoungVariant v = young_variant_from_string(variant);
  const YoungReport r = v == YoungVariant::Cor1 ? power_norm_check(pp) : young_check(v, yp);
  if (c.format == "csv") {
    std::ostringstream os;
    os << "level,ratio,bound\n";
    for (std::size_t i = 0; i < r.lhs_per_level.size(); ++i) {
      os << i << ',' << format_double(r.lhs_per_level[i]) << ',' << format_double(r.rhs_bound) << '\n';
    }
    emit(c, os.str());
  } else {
    emit(c, Json{{"config",
                  {{"variant", to_string(v)},
                   {"c1", yp.c1},
                   {"delta1", yp.delta1},
                   {"c2", yp.c2},
                   {"delta2", yp.delta2},
                   {"c_target", yp.c_target},
                   {"n_max", yp.n_max},
                   {"power", pp.n_power},
                   {"c", pp.c},
                   {"delta", pp.delta},
                   {"c_prime", pp.c_prime},
                   {"bounded", pp.bounded}}},
                 {"lhs_per_level", r.lhs_per_level},
                 {"rhs_bound", r.rhs_bound},
                 {"max_ratio", r.max_ratio},
                 {"satisfied", r.satisfied},
                 {"description", r.description}});
  }
  return r.satisfied ? kOk : kCheckFailed;
}

std::vector<Kernel> basis_from(const Json& cfg, const Box& window, const std::string& spec) {
  if (cfg.contains("basis")) {
    std::vector<Kernel> b;
    for (const auto& k : cfg.at("basis")) b.push_back(kernel_from_json(k));
    return b;
  }
  std::size_t cells = 4;
  if (!spec.empty()) {
    if (spec.rfind("default", 0) != 0) throw Error(ErrorCode::InvalidArgument, "--basis-spec must be default or default:<cells>");
    const auto colon = spec.find(':');
    if (colon != std::string::npos) cells = std::stoul(spec.substr(colon + 1));
  }
  return default_basis(window, cells);
}

int run_posdef(const Common& c, const std::string& basis_spec) {
  const Json cfg = config_of(c);
  const PhaseSpace space = phase_space_from_json(need(cfg, "space"));
  const Box window = window_of(cfg, space);
  const auto basis = basis_from(cfg, window, basis_spec);
  GramOptions go;
  go.samples = c.samples;
  go.seed = c.seed;
  go.exact_tol = c.tol;
  Json out{{"config", cfg}, {"common", common_json(c)}};
  bool ok = true;
  if (cfg.contains("k2")) {
    const CritPosdefReport r = critposdef_check(kernel_from_json(need(cfg, "k1")), kernel_from_json(cfg.at("k2")), basis,
                                                space, window, go);
    out["two_type"] = gram_json(r.two_type);
    out["one_type"] = gram_json(r.one_type);
    out["max_entry_deviation"] = r.max_entry_deviation;
    out["entries_match"] = r.entries_match;
    out["implication_holds"] = r.implication_holds;
    ok = r.entries_match && r.implication_holds;
  } else {
    const Kernel k = kernel_from_json(cfg.contains("kernel") ? cfg.at("kernel") : need(cfg, "k1"));
    const GramReport r = gram_star(k, basis, space, window, go);
    out["report"] = gram_json(r);
    ok = r.psd;
  }
  emit(c, out);
  return ok ? kOk : kCheckFailed;
}

int run_verify_all(const Common& c, bool skip_perf) {
  VerifyOptions o;
  o.seed = c.seed;
  o.n = c.n;
  o.mc_samples = c.samples;
  o.performance = !skip_perf;
  const auto checks = verify_all(o);
  if (c.format == "json") {
    Json arr = Json::array();
    for (const auto& ch : checks) {
      arr.push_back({{"id", ch.id}, {"title", ch.title}, {"passed", ch.passed}, {"informational", ch.informational},
                     {"detail", ch.detail}});
    }
    emit(c, Json{{"config", common_json(c)}, {"checks", arr}, {"all_passed", all_passed(checks)}});
  } else {
    std::ostringstream os;
    os << "id,status,title,detail\n";
    for (const auto& ch : checks) {
      os << ch.id << ',' << (ch.passed ? "PASS" : ch.informational ? "INFO" : "FAIL") << ",\"" << ch.title << "\",\""
         << ch.detail << "\"\n";
    }
    emit(c, os.str());
  }
  for (const auto& ch : checks) std::cerr << format_check(ch) << '\n';
  return all_passed(checks) ? kOk : kCheckFailed;
}

std::pair<unsigned, unsigned> parse_range(const std::string& s) {
  const auto dots = s.find("..");
  try {
    if (dots == std::string::npos) {
      const unsigned v = static_cast<unsigned>(std::stoul(s));
      return {v, v};
    }
    return {static_cast<unsigned>(std::stoul(s.substr(0, dots))), static_cast<unsigned>(std::stoul(s.substr(dots + 2)))};
  } catch (const std::exception&) {
    throw Error(ErrorCode::InvalidArgument, "range must look like 4..20");
  }
}

int run_bench(const Common& c, const std::string& op, const std::string& range, unsigned naive_max) {
  const auto [lo, hi] = parse_range(range);
  if (hi > GroundConfiguration::kMaxPoints || lo > hi) throw Error(ErrorCode::InvalidArgument, "bad size range");
  Philox4x32 rng(c.seed, 0);
  std::ostringstream os;
  os << "n,naive_seconds,fast_seconds\n";
  auto time = [](auto&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };
  for (unsigned n = lo; n <= hi; ++n) {
    std::vector<double> a(std::size_t{1} << n), b(a.size()), out(a.size());
    for (auto& x : a) x = gen::uniform(rng, -1.0, 1.0);
    for (auto& x : b) x = gen::uniform(rng, -1.0, 1.0);
    const bool star = op == "star";
    const unsigned cap = star ? std::min(naive_max, 14u) : naive_max;
    std::string naive = "";
    if (n <= cap) {
      naive = format_double(time([&] { star ? raw::star_naive(a, b, out, n) : raw::conv_naive(a, b, out, n); }));
    }
    const double fast = time([&] { star ? raw::star_fast(a, b, out, n) : raw::conv_ranked(a, b, out, n); });
    os << n << ',' << naive << ',' << format_double(fast) << '\n';
    std::cout.flush();
  }
  emit(c, os.str());
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"starcalc: set-function calculus on finite configurations"};
  app.require_subcommand(1);
  Common c;

  std::string k1p, k2p, mode = "both";
  auto* conv = app.add_subcommand("conv", "Convolution of two set functions");
  add_common(conv, c);
  conv->add_option("--k1", k1p, "First set function (JSON file)");
  conv->add_option("--k2", k2p, "Second set function (JSON file)");
  conv->add_option("--mode", mode, "naive, fast, both or star")->check(CLI::IsMember({"naive", "fast", "both", "star"}));

  std::string kp, op = "exp";
  std::size_t index = 0;
  unsigned power = 2;
  auto* calc = app.add_subcommand("calculus", "exp*, ln*, inverse, powers and derivations");
  add_common(calc, c);
  calc->add_option("--k", kp, "Set function (JSON file)");
  calc->add_option("--op", op, "exp, ln, inv, power, dx, number, zeta or mobius");
  calc->add_option("--index", index, "Point index for dx");
  calc->add_option("--power", power, "Exponent for power");

  std::string ap;
  double t_max = 1.0, dt = 0.1, z = 10.0, margin = 0.1;
  std::size_t max_terms = 400;
  auto* evo = app.add_subcommand("evolve", "Solve dk/dt = a*k on a time grid");
  add_common(evo, c);
  evo->add_option("--a", ap, "Multiplier (JSON file)");
  evo->add_option("--k0", kp, "Initial value (JSON file)");
  evo->add_option("--t-max", t_max, "Final time");
  evo->add_option("--dt", dt, "Output spacing");
  evo->add_option("--max-terms", max_terms, "Series truncation limit");

  auto* res = app.add_subcommand("resolvent", "Resolvent of the multiplication operator");
  add_common(res, c);
  res->add_option("--a", ap, "Multiplier (JSON file)");
  res->add_option("--k", kp, "Right-hand side (JSON file)");
  res->add_option("--z", z, "Spectral parameter");
  res->add_option("--max-terms", max_terms, "Series truncation limit");
  res->add_option("--margin", margin, "Relative margin on the convergence bound");

  std::string method = "auto";
  auto* integ = app.add_subcommand("integrate", "Integrate a kernel against the Lebesgue-Poisson measure");
  add_common(integ, c);
  integ->add_option("--method", method, "auto, closed or mc");

  auto* bog = app.add_subcommand("bogolyubov", "Generating functional of a kernel");
  add_common(bog, c);
  bog->add_option("--method", method, "auto, closed or mc");

  auto* minlos = app.add_subcommand("minlos-check", "Check the pair-integration identity");
  add_common(minlos, c);
  auto* mconv = app.add_subcommand("measure-conv", "Check the convolution of correlation measures");
  add_common(mconv, c);

  std::string variant = "Y1";
  YoungParams yp;
  PowerParams pp;
  auto* young = app.add_subcommand("young", "Per-level norm inequalities for convolutions");
  add_common(young, c);
  young->add_option("--variant", variant, "Y1..Y5 or cor1");
  young->add_option("--c1", yp.c1);
  young->add_option("--delta1", yp.delta1);
  young->add_option("--c2", yp.c2);
  young->add_option("--delta2", yp.delta2);
  young->add_option("--c-target", yp.c_target, "Target weight (Y3, Y5)");
  young->add_option("--n-max", yp.n_max, "Highest level checked");
  young->add_option("--power", pp.n_power, "Power (cor1)");
  young->add_option("--c", pp.c, "Weight of the base function (cor1)");
  young->add_option("--delta", pp.delta, "Factorial power of the base function (cor1)");
  young->add_option("--c-prime", pp.c_prime, "Target weight (cor1)");
  young->add_flag("--bounded", pp.bounded, "Bounded base function (cor1)");

  std::string basis_spec;
  auto* pd = app.add_subcommand("posdef", "Finite-basis positive-definiteness test");
  add_common(pd, c);
  pd->add_option("--basis-spec", basis_spec, "default or default:<cells>");

  bool skip_perf = false;
  auto* va = app.add_subcommand("verify-all", "Run every acceptance criterion and invariant");
  add_common(va, c);
  va->add_flag("--skip-performance", skip_perf, "Leave out the timing check");

  std::string bench_op = "conv", range = "4..20";
  unsigned naive_max = 16;
  auto* bench = app.add_subcommand("bench", "Time naive against fast transforms");
  add_common(bench, c);
  bench->add_option("--op", bench_op, "conv or star")->check(CLI::IsMember({"conv", "star"}));
  bench->add_option("--range", range, "Sizes, e.g. 4..20");
  bench->add_option("--naive-max", naive_max, "Largest size for the naive transform");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }
  if (*va && va->count("--seed") == 0) c.seed = 42;
  try {
    yp.n_max = young->count("--n-max") ? yp.n_max : 30;
    pp.n_max = yp.n_max;
    pp.c_prime = young->count("--c-prime") ? pp.c_prime : yp.c_target;
    if (*conv) return run_conv(c, k1p, k2p, mode);
    if (*calc) return run_calculus(c, kp, op, index, power);
    if (*evo) return run_evolve(c, ap, kp, t_max, dt, max_terms);
    if (*res) return run_resolvent(c, ap, kp, z, max_terms, margin);
    if (*integ) return run_integrate(c, method);
    if (*bog) return run_bogolyubov(c, method);
    if (*minlos) return run_minlos(c);
    if (*mconv) return run_measure_conv(c);
    if (*young) return run_young(c, variant, yp, pp);
    if (*pd) return run_posdef(c, basis_spec);
    if (*va) return run_verify_all(c, skip_perf);
    if (*bench) return run_bench(c, bench_op, range, naive_max);
  } catch (const Error& e) {
    std::cerr << "starcalc: " << e.what() << '\n';
    std::cerr << "run with --help for the expected inputs\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "starcalc: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
