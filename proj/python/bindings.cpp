#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "wsc/cli.hpp"
#include "wsc/convex_construction.hpp"
#include "wsc/divergence.hpp"
#include "wsc/io.hpp"
#include "wsc/sequence_spaces.hpp"

namespace py = pybind11;
using wsc::Rational;
using Json = wsc::io::Json;

namespace {

// Anything whose str() is an integer, decimal or p/q: int, str, Fraction.
Rational scalar(const py::handle& value) {
  return wsc::parse_scalar<Rational>(py::str(value).cast<std::string>());
}

std::optional<Rational> optional_scalar(const py::object& value) {
  if (value.is_none()) return std::nullopt;
  return scalar(value);
}

std::vector<Rational> scalars(const py::iterable& values) {
  std::vector<Rational> out;
  for (const py::handle& v : values) out.push_back(scalar(v));
  return out;
}

std::vector<std::string> strings(const std::vector<Rational>& values) {
  std::vector<std::string> out;
  out.reserve(values.size());
  for (const Rational& v : values) out.push_back(wsc::format_scalar(v));
  return out;
}

py::object to_python(const Json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

Json from_python(const py::object& obj) {
  return Json::parse(py::module_::import("json").attr("dumps")(obj).cast<std::string>());
}

std::optional<wsc::CaseKind> case_choice(const py::object& value) {
  if (value.is_none()) return std::nullopt;
  const std::string text = py::str(value).cast<std::string>();
  if (text == "auto") return std::nullopt;
  return wsc::parse_case_kind(text);
}

wsc::DualFunctional<Rational> probe_from(const py::object& probe) {
  if (py::isinstance<py::str>(probe)) {
    const std::string name = probe.cast<std::string>();
    if (name == "canonical") return wsc::canonical_probe<Rational>();
    if (name == "decreasing") return wsc::decreasing_probe<Rational>();
    throw wsc::Error(wsc::ErrorKind::InvalidInput, "unknown probe '" + name + "'");
  }
  return wsc::io::functional_from_json<Rational>(from_python(probe));
}

wsc::FamilySpec<Rational> family_from(const py::object& family) {
  if (py::isinstance<py::str>(family)) {
    wsc::FamilySpec<Rational> spec;
    spec.kind = wsc::parse_family_kind(family.cast<std::string>());
    return spec;
  }
  return wsc::io::family_from_json<Rational>(from_python(family));
}

class Interpolant {
 public:
  Interpolant(const py::iterable& knots, const py::iterable& values)
      : g_(wsc::build_sup_of_lines<Rational>(scalars(knots), scalars(values))) {}
  explicit Interpolant(wsc::SupOfLines<Rational> g) : g_(std::move(g)) {}

  std::string eval(const py::object& r) const { return wsc::format_scalar(wsc::eval_g(g_, scalar(r))); }
  std::string eval_interval(const py::object& r) const {
    return wsc::format_scalar(wsc::eval_g_interval(g_, scalar(r)));
  }
  std::size_t piece_index(const py::object& r) const { return wsc::piece_index(g_, scalar(r)); }
  std::vector<std::string> knots() const { return strings(g_.knots); }
  std::vector<std::string> values() const { return strings(g_.values); }

 private:
  wsc::SupOfLines<Rational> g_;
};

class Counterexample {
 public:
  Counterexample(std::size_t depth, const py::object& probe, const py::object& case_kind,
                 const py::object& q, const py::object& target_z, std::size_t terms,
                 const py::object& family) {
    wsc::CounterexampleOptions<Rational> options;
    options.depth = depth;
    options.target_z = scalar(target_z);
    options.q = optional_scalar(q);
    options.forced_case = case_choice(case_kind);
    cx_ = wsc::build_counterexample_scanning(family_from(family), probe_from(probe), options, terms);
    g_ = wsc::interpolant(cx_.map.plan);
  }

  std::string case_name() const { return wsc::to_string(cx_.map.case_kind()); }
  std::size_t depth() const { return cx_.map.depth(); }
  std::vector<std::size_t> indices() const { return cx_.map.plan.sub_indices; }
  std::vector<std::string> knots() const { return strings(cx_.map.knots()); }
  std::vector<std::string> values() const { return strings(cx_.map.plan.values_a); }
  std::vector<std::string> node_coefficients() const { return strings(cx_.map.node_coefficients); }
  py::object q() const {
    const auto& q = cx_.map.plan.case_tag.q;
    return q ? py::object(py::str(wsc::format_scalar(*q))) : py::object(py::none());
  }
  py::object plan() const { return to_python(wsc::io::to_json(cx_.map.plan)); }
  py::object cone() const { return to_python(wsc::io::to_json(cx_.cone)); }

  std::vector<std::string> F(const py::object& r) const {
    return strings(wsc::eval_F(cx_.map, scalar(r)).coords());
  }
  std::string scalarize(const py::object& r) const {
    return wsc::format_scalar(wsc::pair(cx_.cone.generator, wsc::eval_F(cx_.map, scalar(r))));
  }
  std::string g(const py::object& r) const { return wsc::format_scalar(wsc::eval_g(g_, scalar(r))); }

  py::dict quotient_trace(const std::optional<std::vector<std::size_t>>& ks) const {
    std::vector<std::size_t> labels;
    if (ks) {
      labels = *ks;
    } else {
      for (std::size_t k = 1; k <= cx_.map.depth(); ++k) labels.push_back(k);
    }
    const auto trace = wsc::quotient_trace(cx_.map, cx_.cone, labels);
    std::vector<std::vector<std::string>> gaps;
    for (const auto& row : trace.gaps) gaps.push_back(strings(row));
    py::dict out;
    out["ks"] = trace.ks;
    out["ms"] = trace.ms;
    out["ts"] = strings(trace.ts);
    out["scalarized"] = strings(trace.scalarized);
    out["gaps"] = gaps;
    return out;
  }

  bool assert_divergence(const py::object& floor) const {
    std::vector<std::size_t> labels;
    for (std::size_t k = 1; k <= cx_.map.depth(); ++k) labels.push_back(k);
    return wsc::assert_divergence(wsc::quotient_trace(cx_.map, cx_.cone, labels), scalar(floor));
  }

  py::object verify_convexity(std::size_t trials, std::uint64_t seed) const {
    return to_python(wsc::io::to_json(wsc::verify_K_convexity(cx_.map, cx_.cone, trials, seed)));
  }

  py::object scalarization_identity(std::size_t samples) const {
    const auto rs = wsc::log_spaced_samples(cx_.map, samples);
    return to_python(wsc::io::to_json(wsc::scalarization_identity(cx_.map, cx_.cone, rs)));
  }

  py::object monotonicity() const {
    return to_python(wsc::io::to_json(wsc::quotient_monotonicity(cx_.map, cx_.cone, cx_.map.knots())));
  }

 private:
  wsc::Counterexample<Rational> cx_;
  wsc::SupOfLines<Rational> g_;
};

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact-rational bindings for the wsc_forge library";

  // Module lifetime; the translator below cannot capture.
  static py::handle error_type = py::exception<wsc::Error>(m, "WscError", PyExc_ValueError).release();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const wsc::Error& e) {
      py::object type = py::reinterpret_borrow<py::object>(error_type);
      py::object err = type(e.what());
      err.attr("kind") = wsc::to_string(e.kind());
      err.attr("index") = e.index() ? py::object(py::int_(*e.index())) : py::object(py::none());
      PyErr_SetObject(type.ptr(), err.ptr());
    }
  });

  m.def("normalize", [](const py::object& x) { return wsc::format_scalar(scalar(x)); },
        "Canonical p/q form of a scalar.");

  m.def(
      "build_prop41",
      [](const py::iterable& sequence) {
        const auto result = wsc::build_prop41<Rational>(scalars(sequence));
        py::dict out;
        out["indices"] = result.indices;
        out["knots"] = strings(result.g.knots);
        out["values"] = strings(result.g.values);
        out["zero_crossings"] = strings(result.zero_crossings);
        return out;
      },
      py::arg("sequence"), "Integer-knot convex interpolant of a nonincreasing nonnegative sequence.");

  m.def(
      "plan_case",
      [](const py::iterable& values, const py::object& limit_z, std::size_t depth, const py::object& q,
         const py::object& case_kind) {
        wsc::PlanRequest<Rational> request{scalar(limit_z), optional_scalar(q), depth, case_choice(case_kind)};
        const std::vector<Rational> z = scalars(values);
        return to_python(wsc::io::to_json(wsc::plan_case<Rational>(z, request)));
      },
      py::arg("values"), py::arg("limit_z"), py::arg("depth"), py::arg("q") = py::none(),
      py::arg("case") = py::none(), "Four-case knot/value plan as a dict.");

  m.def("infimum_gap_demo", [](std::size_t n_max) { return strings(wsc::infimum_gap_demo<Rational>(n_max)); },
        py::arg("n_max"));

  m.def(
      "cli_main",
      [](const std::vector<std::string>& args) {
        std::vector<const char*> argv{"wsc_forge"};
        for (const auto& a : args) argv.push_back(a.c_str());
        return wsc::cli::main(static_cast<int>(argv.size()), argv.data());
      },
      py::arg("args"), "Runs the wsc_forge command line with the given arguments.");

  py::class_<Interpolant>(m, "Interpolant")
      .def(py::init<const py::iterable&, const py::iterable&>(), py::arg("knots"), py::arg("values"))
      .def_static(
          "from_plan",
          [](const py::object& plan) {
            return Interpolant(wsc::interpolant(wsc::io::plan_from_json<Rational>(from_python(plan))));
          },
          py::arg("plan"))
      .def("__call__", &Interpolant::eval, py::arg("r"))
      .def("eval_interval", &Interpolant::eval_interval, py::arg("r"))
      .def("piece_index", &Interpolant::piece_index, py::arg("r"))
      .def_property_readonly("knots", &Interpolant::knots)
      .def_property_readonly("values", &Interpolant::values);

  py::class_<Counterexample>(m, "Counterexample")
      .def(py::init<std::size_t, const py::object&, const py::object&, const py::object&, const py::object&,
                    std::size_t, const py::object&>(),
           py::arg("depth") = 8, py::arg("probe") = "canonical", py::arg("case") = "auto",
           py::arg("q") = py::none(), py::arg("target_z") = "1/2", py::arg("terms") = 0,
           py::arg("family") = "c0-partial-sums")
      .def_property_readonly("case", &Counterexample::case_name)
      .def_property_readonly("depth", &Counterexample::depth)
      .def_property_readonly("indices", &Counterexample::indices)
      .def_property_readonly("knots", &Counterexample::knots)
      .def_property_readonly("values", &Counterexample::values)
      .def_property_readonly("node_coefficients", &Counterexample::node_coefficients)
      .def_property_readonly("q", &Counterexample::q)
      .def("plan", &Counterexample::plan)
      .def("cone", &Counterexample::cone)
      .def("F", &Counterexample::F, py::arg("r"), "Dense coordinates of F(r h).")
      .def("scalarize", &Counterexample::scalarize, py::arg("r"))
      .def("g", &Counterexample::g, py::arg("r"))
      .def("quotient_trace", &Counterexample::quotient_trace, py::arg("ks") = py::none())
      .def("assert_divergence", &Counterexample::assert_divergence, py::arg("floor"))
      .def("verify_convexity", &Counterexample::verify_convexity, py::arg("trials") = 1000,
           py::arg("seed") = 0)
      .def("scalarization_identity", &Counterexample::scalarization_identity, py::arg("samples") = 100)
      .def("monotonicity", &Counterexample::monotonicity);
}
