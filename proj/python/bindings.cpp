// Python bindings. Structured results cross the boundary as JSON text and
// are decoded on the Python side.
#include "heavenly/cli.hpp"
#include "heavenly/suite.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace heavenly;

namespace {

Bindings make_bindings(const std::map<std::string, std::string>& defs) {
  Bindings b;
  for (const auto& [name, text] : defs) b[name] = parse_unary_function(text);
  return b;
}

std::vector<Rational> make_lambdas(const std::vector<std::string>& values) {
  std::vector<Rational> out;
  for (const auto& v : values) out.push_back(parse_rational(v));
  return out;
}

std::string residual_json(const std::string& system, const std::string& key, const std::vector<std::string>& lambdas,
                          std::size_t points, std::uint64_t seed, double tolerance) {
  auto l = make_lambdas(lambdas);
  if (l.empty()) l = default_lambdas(system_info(system).lambda_count);
  auto sample = sample_points(default_domain(system), points, seed);
  return to_json(residual(system, parse(key), l, sample, {}, tolerance)).dump();
}

std::string check_json(const std::string& id, std::size_t points, std::uint64_t seed) {
  CheckOptions o;
  o.residual_points = o.structure_points = points;
  o.seed = seed;
  Json out = Json::array();
  for (const auto& r : check_entry(build(id), o)) out.push_back(to_json(r));
  return out.dump();
}

std::string display_invariants_json(const std::string& psi, double Z, double kappa, double mu) {
  Expr P = parse(psi);
  CurvatureEngine eng(holo_metric(P));
  Point q{{"x", 0.0}, {"Z", Z}, {"kappa", kappa}, {"mu", mu}};
  Json j = to_json(invariants_report(selfdual_weyl(eng.at(q))));
  j["closed_form"] = {{"I", eval(holo_I(P), q)}, {"J", eval(holo_J(P), q)}};
  return j.dump();
}

std::string acceptance_json() {
  Json out = Json::array();
  for (const auto& c : run_acceptance()) out.push_back(to_json(c));
  return out.dump();
}

py::tuple cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return py::make_tuple(code, out.str(), err.str());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Gindikin structures, heavenly equations and self-dual vacuum metrics";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ArithmeticError);
  py::register_exception<UnboundSymbol>(m, "UnboundSymbol", PyExc_KeyError);

  py::class_<Expr>(m, "Expr")
      .def(py::init([](const std::string& text) { return parse(text); }), py::arg("text"))
      .def("__str__", &Expr::str)
      .def("__repr__", [](const Expr& e) { return "Expr('" + e.str() + "')"; })
      .def("__eq__", [](const Expr& a, const Expr& b) { return a == b; })
      .def("__hash__", &Expr::hash)
      .def("__add__", [](const Expr& a, const Expr& b) { return a + b; })
      .def("__sub__", [](const Expr& a, const Expr& b) { return a - b; })
      .def("__mul__", [](const Expr& a, const Expr& b) { return a * b; })
      .def("__truediv__", [](const Expr& a, const Expr& b) { return a / b; })
      .def("__neg__", [](const Expr& a) { return -a; })
      .def("diff", [](const Expr& e, const std::string& v) { return diff(e, v); }, py::arg("var"))
      .def("diff_n", [](const Expr& e, const std::vector<std::string>& vs) { return diff(e, vs); }, py::arg("vars"))
      .def("subst", [](const Expr& e, const std::map<std::string, Expr>& r) { return subst(e, r); },
           py::arg("replacements"))
      .def("free_variables", [](const Expr& e) { return free_variables(e); })
      .def("evaluate",
           [](const Expr& e, const Point& p, const std::map<std::string, std::string>& fns) {
             return eval(e, p, make_bindings(fns));
           },
           py::arg("point"), py::arg("functions") = std::map<std::string, std::string>{});

  m.def("parse", &parse, py::arg("text"));
  m.def("fd_oracle",
        [](const Expr& e, const std::string& v, const Point& p, double h) { return fd_oracle(e, v, p, h); },
        py::arg("expr"), py::arg("var"), py::arg("point"), py::arg("h") = 1e-4);

  m.def("systems", [] {
    std::vector<std::string> ids;
    for (const auto& s : systems()) ids.push_back(s.id);
    return ids;
  });
  m.def("_residual", &residual_json, py::arg("system"), py::arg("key"), py::arg("lambdas"), py::arg("points"),
        py::arg("seed"), py::arg("tolerance"));

  m.def("catalog_ids", &catalog_ids);
  m.def("_catalog_entry", [](const std::string& id) { return to_json(catalog_entry(id)).dump(); });
  m.def("_check_entry", &check_json, py::arg("id"), py::arg("points"), py::arg("seed"));
  m.def("_display_invariants", &display_invariants_json, py::arg("psi"), py::arg("Z"), py::arg("kappa"),
        py::arg("mu"));
  m.def("_acceptance", &acceptance_json);
  m.def("run_cli", &cli, py::arg("args"), "Runs the command-line tool in-process; returns (exit code, stdout, stderr).");
}
