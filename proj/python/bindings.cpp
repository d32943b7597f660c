#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "starcalc/calculus.hpp"
#include "starcalc/error.hpp"
#include "starcalc/evolution.hpp"
#include "starcalc/io.hpp"
#include "starcalc/kernel.hpp"
#include "starcalc/lebesgue_poisson.hpp"
#include "starcalc/norms.hpp"
#include "starcalc/posdef.hpp"
#include "starcalc/transforms.hpp"
#include "starcalc/verify.hpp"

namespace py = pybind11;
using namespace starcalc;

namespace {

PhasePoint to_point(const py::handle& h) {
  if (py::isinstance<py::float_>(h) || py::isinstance<py::int_>(h)) return PhasePoint{h.cast<double>()};
  return PhasePoint(h.cast<std::vector<double>>());
}

std::vector<PhasePoint> to_points(const py::iterable& pts) {
  std::vector<PhasePoint> out;
  for (const auto& p : pts) out.push_back(to_point(p));
  return out;
}

py::list from_points(const std::vector<PhasePoint>& pts) {
  py::list out;
  for (const auto& p : pts) out.append(py::cast(p.coords));
  return out;
}

py::array_t<double> to_array(std::span<const double> v) {
  py::array_t<double> a(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), a.mutable_data());
  return a;
}

SetFunction make_function(const py::iterable& points, const py::array_t<double, py::array::c_style | py::array::forcecast>& values) {
  auto g = std::make_shared<const GroundConfiguration>(to_points(points));
  return SetFunction(g, std::vector<double>(values.data(), values.data() + values.size()));
}

py::dict estimate_dict(const IntegralEstimate& e) {
  py::dict d;
  d["value"] = e.value;
  d["stderr"] = e.std_error;
  d["samples"] = e.samples;
  d["exact"] = e.exact;
  d["seed"] = e.seed;
  return d;
}

Json parse(const std::string& s) { return parse_json(s); }

}  // namespace

PYBIND11_MODULE(_starcalc, m) {
  m.doc() = "Subset-lattice algebra, star calculus and Lebesgue-Poisson integration.";

  static py::exception<Error> error(m, "StarcalcError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      // args = (code, message)
      PyErr_SetObject(error.ptr(), py::make_tuple(to_string(e.code()), e.what()).ptr());
    }
  });

  py::class_<SetFunction>(m, "SetFunction")
      .def(py::init(&make_function), py::arg("points"), py::arg("values"))
      .def_property_readonly("values", [](const SetFunction& f) { return to_array(f.values()); })
      .def_property_readonly("points", [](const SetFunction& f) { return from_points(f.ground().points()); })
      .def_property_readonly("n", &SetFunction::ground_size)
      .def("__len__", &SetFunction::size)
      .def("__getitem__", [](const SetFunction& f, Mask m) { return f.at(m); })
      .def("sup_norm", &SetFunction::sup_norm)
      .def("__add__", [](const SetFunction& a, const SetFunction& b) { return a + b; })
      .def("__sub__", [](const SetFunction& a, const SetFunction& b) { return a - b; })
      .def("__mul__", [](const SetFunction& a, double s) { return a * s; })
      .def("__rmul__", [](const SetFunction& a, double s) { return s * a; })
      .def("__neg__", [](const SetFunction& a) { return -a; })
      .def("to_json", [](const SetFunction& f) { return to_json(f).dump(); })
      .def_static("from_json", [](const std::string& s) { return set_function_from_json(parse(s)); })
      .def("__repr__", [](const SetFunction& f) { return "<SetFunction n=" + std::to_string(f.ground_size()) + ">"; });

  m.def("unit", [](const py::iterable& pts) {
    return SetFunction::unit(std::make_shared<const GroundConfiguration>(to_points(pts)));
  });

  m.def("conv_naive", &conv_naive);
  m.def("conv_fast", &conv_fast);
  m.def("star_naive", &star_naive);
  m.def("star_fast", &star_fast);
  m.def("zeta", &zeta);
  m.def("mobius", &mobius);
  m.def("conv_crossover", &conv_crossover);
  m.def("set_conv_crossover", &set_conv_crossover);

  m.def("star_power", &star_power, py::arg("u"), py::arg("n"));
  m.def("exp_star", &exp_star);
  m.def("ln_star", &ln_star);
  m.def("inv_star", &inv_star);
  m.def("f_star_series", [](const std::vector<double>& c, const SetFunction& u) { return f_star_series(c, u); });
  m.def("d_x", &d_x, py::arg("g"), py::arg("i"));
  m.def("number_op", &number_op);

  py::class_<PhaseSpace>(m, "PhaseSpace")
      .def_static("from_json", [](const std::string& s) { return phase_space_from_json(parse(s)); })
      .def("to_json", [](const PhaseSpace& s) { return to_json(s).dump(); })
      .def_property_readonly("dim", &PhaseSpace::dim)
      .def_property_readonly("activity", &PhaseSpace::activity)
      .def("mass", [](const PhaseSpace& s) { return s.mass(); });

  py::class_<Kernel>(m, "Kernel")
      .def_static("from_json", [](const std::string& s) { return kernel_from_json(parse(s)); })
      .def_static("custom", [](std::string name, std::function<double(py::list)> fn) {
        return Kernel::custom(std::move(name), [fn](std::span<const PhasePoint> pts) {
          py::gil_scoped_acquire gil;
          return fn(from_points(std::vector<PhasePoint>(pts.begin(), pts.end())));
        });
      })
      .def("to_json", [](const Kernel& k) { return to_json(k).dump(); })
      .def("__call__", [](const Kernel& k, const py::iterable& pts) { return k(to_points(pts)); })
      .def("describe", &Kernel::describe)
      .def("tabulate", [](const Kernel& k, const py::iterable& pts) {
        return tabulate(k, std::make_shared<const GroundConfiguration>(to_points(pts)));
      });

  m.def(
      "integrate",
      [](const Kernel& k, const PhaseSpace& space, std::size_t samples, std::uint64_t seed, bool monte_carlo) {
        IntegralEstimate e;
        {
          py::gil_scoped_release nogil;
          e = monte_carlo ? integrate_mc(k, space, space.box(), samples, seed)
                          : integrate_kernel(k, space, space.box(), samples, seed);
        }
        return estimate_dict(e);
      },
      py::arg("kernel"), py::arg("space"), py::arg("samples") = 100000, py::arg("seed") = 1,
      py::arg("monte_carlo") = false);

  m.def(
      "evolve",
      [](const SetFunction& a, const SetFunction& k0, double t) {
        auto r = evolve(a, k0, t);
        return py::make_tuple(r.solution, r.truncation_terms, r.tail_bound);
      },
      py::arg("a"), py::arg("k0"), py::arg("t"));

  m.def(
      "resolvent",
      [](const SetFunction& a, const SetFunction& k, double z, double margin) {
        ResolventOptions opt;
        opt.margin = margin;
        auto r = resolvent(a, k, z, opt);
        return py::make_tuple(r.solution, r.terms, r.residual);
      },
      py::arg("a"), py::arg("k"), py::arg("z"), py::arg("margin") = 0.1);

  m.def(
      "young_check",
      [](const std::string& variant, double c1, double delta1, double c2, double delta2, double c_target,
         std::size_t n_max) {
        YoungParams p{c1, delta1, c2, delta2, c_target, n_max};
        auto r = young_check(young_variant_from_string(variant), p);
        py::dict d;
        d["satisfied"] = r.satisfied;
        d["max_ratio"] = r.max_ratio;
        d["bound"] = r.rhs_bound;
        d["per_level"] = r.lhs_per_level;
        d["description"] = r.description;
        return d;
      },
      py::arg("variant"), py::arg("c1") = 1.0, py::arg("delta1") = 0.0, py::arg("c2") = 1.0, py::arg("delta2") = 0.0,
      py::arg("c_target") = 2.0, py::arg("n_max") = 30);

  m.def(
      "gram_star",
      [](const Kernel& k, const PhaseSpace& space, std::size_t cells, std::size_t samples, std::uint64_t seed) {
        GramOptions opt;
        opt.samples = samples;
        opt.seed = seed;
        auto r = gram_star(k, default_basis(space.box(), cells), space, space.box(), opt);
        py::dict d;
        d["matrix"] = r.matrix;
        d["eigenvalues"] = r.eigenvalues;
        d["min_eig"] = r.min_eig;
        d["psd"] = r.psd;
        d["verdict"] = r.verdict;
        return d;
      },
      py::arg("kernel"), py::arg("space"), py::arg("cells") = 4, py::arg("samples") = 20000, py::arg("seed") = 5);

  m.def(
      "verify_all",
      [](std::uint64_t seed, unsigned n, bool performance) {
        VerifyOptions opt;
        opt.seed = seed;
        opt.n = n;
        opt.performance = performance;
        std::vector<CheckResult> checks;
        {
          py::gil_scoped_release nogil;
          checks = verify_all(opt);
        }
        py::list out;
        for (const auto& c : checks) {
          py::dict d;
          d["id"] = c.id;
          d["title"] = c.title;
          d["passed"] = c.passed;
          d["informational"] = c.informational;
          d["detail"] = c.detail;
          out.append(d);
        }
        return out;
      },
      py::arg("seed") = 42, py::arg("n") = 10, py::arg("performance") = false);
}
