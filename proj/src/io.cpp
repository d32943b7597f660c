#include "starcalc/io.hpp"

#include <bit>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "starcalc/error.hpp"

namespace starcalc {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::ParseError, what); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) bad(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

double number(const Json& j, const char* what) {
  if (!j.is_number()) bad(std::string(what) + " must be a number");
  return j.get<double>();
}

Expr expr_field(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (v.is_number()) return Expr::constant(v.get<double>());
  if (!v.is_string()) bad(std::string("field \"") + key + "\" must be an expression string");
  return Expr::parse(v.get<std::string>());
}

std::vector<Kernel> kernel_list(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_array()) bad(std::string("field \"") + key + "\" must be an array of kernels");
  std::vector<Kernel> out;
  for (const auto& e : v) out.push_back(kernel_from_json(e));
  return out;
}

}  // namespace

Box box_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) bad("box must be a non-empty array of [lo, hi] pairs");
  std::vector<Interval> axes;
  for (const auto& iv : j) {
    if (!iv.is_array() || iv.size() != 2) bad("box axis must be a [lo, hi] pair");
    axes.push_back({number(iv[0], "box bound"), number(iv[1], "box bound")});
  }
  return Box(std::move(axes));
}

Json to_json(const Box& box) {
  Json j = Json::array();
  for (const auto& iv : box.axes()) j.push_back({iv.lo, iv.hi});
  return j;
}

PhaseSpace phase_space_from_json(const Json& j) {
  Box box = box_from_json(field(j, "box"));
  if (j.contains("dim") && field(j, "dim").get<long long>() != static_cast<long long>(box.dim())) {
    bad("\"dim\" does not match the number of box axes");
  }
  const double z = j.contains("z") ? number(j.at("z"), "z") : 1.0;
  Expr density = j.contains("density") ? expr_field(j, "density") : Expr::constant(1.0);
  return PhaseSpace(std::move(box), z, std::move(density));
}

Json to_json(const PhaseSpace& space) {
  return Json{{"dim", space.dim()},
              {"box", to_json(space.box())},
              {"z", space.activity()},
              {"density", space.density().to_string()}};
}

Kernel kernel_from_json(const Json& j) {
  const Json& t = field(j, "type");
  if (!t.is_string()) bad("kernel type must be a string");
  const std::string type = t.get<std::string>();
  if (type == "lp_exponent") return Kernel::lp_exponent(expr_field(j, "f"));
  if (type == "constant_level") return Kernel::constant_level(number(field(j, "c"), "c"));
  if (type == "unit_star") return Kernel::unit_star();
  if (type == "singleton") return Kernel::singleton(expr_field(j, "sigma"));
  if (type == "level_weight") {
    const Json& w = field(j, "weights");
    if (!w.is_array()) bad("weights must be an array");
    std::vector<double> ws;
    for (const auto& x : w) ws.push_back(number(x, "weight"));
    return Kernel::level_weight(std::move(ws));
  }
  if (type == "extremal_witness") {
    return Kernel::extremal_witness(number(field(j, "C"), "C"), number(field(j, "delta"), "delta"));
  }
  if (type == "sum") return Kernel::sum(kernel_list(j, "terms"));
  if (type == "product") return Kernel::product(kernel_list(j, "factors"));
  if (type == "scale") return Kernel::scale(number(field(j, "factor"), "factor"), kernel_from_json(field(j, "kernel")));
  if (type == "convolution") return Kernel::convolution(kernel_from_json(field(j, "left")), kernel_from_json(field(j, "right")));
  if (type == "exp_star") return Kernel::exp_star(kernel_from_json(field(j, "u")));
  bad("unknown kernel type \"" + type + "\"");
}

Json to_json(const Kernel& k) {
  using F = Kernel::Family;
  auto list = [&]() {
    Json a = Json::array();
    for (const auto& c : k.children()) a.push_back(to_json(c));
    return a;
  };
  switch (k.family()) {
    case F::LPExponent: return {{"type", "lp_exponent"}, {"f", k.exprs()[0].to_string()}};
    case F::ConstantLevel: return {{"type", "constant_level"}, {"c", k.params()[0]}};
    case F::UnitStar: return {{"type", "unit_star"}};
    case F::Singleton: return {{"type", "singleton"}, {"sigma", k.exprs()[0].to_string()}};
    case F::LevelWeight: return {{"type", "level_weight"}, {"weights", k.params()}};
    case F::ExtremalWitness: return {{"type", "extremal_witness"}, {"C", k.params()[0]}, {"delta", k.params()[1]}};
    case F::Sum: return {{"type", "sum"}, {"terms", list()}};
    case F::Product: return {{"type", "product"}, {"factors", list()}};
    case F::Scale: return {{"type", "scale"}, {"factor", k.params()[0]}, {"kernel", to_json(k.children()[0])}};
    case F::Convolution:
      return {{"type", "convolution"}, {"left", to_json(k.children()[0])}, {"right", to_json(k.children()[1])}};
    case F::ExpStar: return {{"type", "exp_star"}, {"u", to_json(k.children()[0])}};
    case F::Custom: break;
  }
  throw Error(ErrorCode::InvalidArgument, "custom kernels cannot be serialized");
}

PhasePoint point_from_json(const Json& j) {
  if (j.is_number()) return PhasePoint{j.get<double>()};
  if (!j.is_array()) bad("point must be a coordinate array");
  std::vector<double> c;
  for (const auto& x : j) c.push_back(number(x, "coordinate"));
  return PhasePoint(std::move(c));
}

Json to_json(const PhasePoint& p) { return Json(p.coords); }

GroundConfiguration ground_from_json(const Json& j) {
  if (!j.is_array()) bad("ground must be an array of points");
  std::vector<PhasePoint> pts;
  for (const auto& p : j) pts.push_back(point_from_json(p));
  return GroundConfiguration(std::move(pts));
}

Json to_json(const GroundConfiguration& g) {
  Json j = Json::array();
  for (const auto& p : g.points()) j.push_back(to_json(p));
  return j;
}

SetFunction set_function_from_json(const Json& j) {
  GroundConfiguration g = ground_from_json(field(j, "ground"));
  const Json& v = field(j, "values");
  if (!v.is_array()) bad("values must be an array");
  std::vector<double> values;
  for (const auto& x : v) values.push_back(number(x, "value"));
  return SetFunction(std::move(g), std::move(values));
}

Json to_json(const SetFunction& f) {
  return Json{{"ground", to_json(f.ground())},
              {"values", std::vector<double>(f.values().begin(), f.values().end())}};
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string to_csv(const SetFunction& f) {
  std::ostringstream os;
  os << "mask,cardinality,value\n";
  for (std::size_t m = 0; m < f.size(); ++m) {
    os << m << ',' << std::popcount(m) << ',' << format_double(f.values()[m]) << '\n';
  }
  return os.str();
}

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    bad(std::string("malformed JSON: ") + e.what());
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json(ss.str());
}

}  // namespace starcalc
