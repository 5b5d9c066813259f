#include "heavenly/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

namespace heavenly {

bool ResidualReport::pass() const {
  return std::all_of(equations.begin(), equations.end(),
                     [&](const EquationResidual& e) { return e.max_normalized <= tolerance; });
}

double ResidualReport::max_normalized() const {
  double m = 0.0;
  for (const auto& e : equations) m = std::max(m, e.max_normalized);
  return m;
}

double ResidualReport::max_abs() const {
  double m = 0.0;
  for (const auto& e : equations) m = std::max(m, e.max_abs);
  return m;
}

const EquationResidual& ResidualReport::equation(const std::string& name) const {
  for (const auto& e : equations)
    if (e.name == name) return e;
  throw std::out_of_range("no residual named '" + name + "' in report " + id);
}

ResidualReport measure_residuals(const std::string& id, const std::vector<ResidualGroup>& groups,
                                 const std::vector<Point>& points, const Bindings& bindings, double tolerance) {
  ResidualReport report;
  report.id = id;
  report.points = points.size();
  report.tolerance = tolerance;

  std::vector<Expr> outputs;
  struct Slot {
    std::size_t group;
    std::size_t value;
    std::size_t first_term;
    std::size_t terms;
  };
  std::vector<Slot> slots;
  std::set<std::string> vars;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    for (const auto& e : groups[g].exprs) {
      Expr bound = bind_functions(e, bindings);
      auto fv = free_variables(bound);
      vars.insert(fv.begin(), fv.end());
      Slot s{g, outputs.size(), 0, 0};
      outputs.push_back(bound);
      s.first_term = outputs.size();
      for (const auto& t : summands(bound)) outputs.push_back(t);
      s.terms = outputs.size() - s.first_term;
      slots.push_back(s);
    }
  }
  report.equations.resize(groups.size());
  for (std::size_t g = 0; g < groups.size(); ++g) report.equations[g].name = groups[g].name;
  if (outputs.empty()) return report;

  std::vector<std::string> inputs(vars.begin(), vars.end());
  Program prog(outputs, inputs);
  std::vector<double> in(inputs.size()), out(outputs.size()), scratch;
  for (const auto& p : points) {
    for (std::size_t i = 0; i < inputs.size(); ++i) {
      auto it = p.find(inputs[i]);
      if (it == p.end()) throw UnboundSymbol(inputs[i]);
      in[i] = it->second;
    }
    prog.run(in.data(), out.data(), scratch);
    for (const auto& s : slots) {
      double r = std::fabs(out[s.value]);
      double scale = 0.0;
      for (std::size_t k = 0; k < s.terms; ++k) scale = std::max(scale, std::fabs(out[s.first_term + k]));
      auto& eq = report.equations[s.group];
      eq.max_abs = std::max(eq.max_abs, r);
      eq.max_normalized = std::max(eq.max_normalized, r / (1.0 + scale));
    }
  }
  return report;
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

Json rational_json(const Rational& q) { return to_string(q); }

Json to_json(const ResidualReport& r) {
  Json j;
  j["id"] = r.id;
  Json panel = Json::array();
  for (const auto& l : r.lambda_panel) panel.push_back(rational_json(l));
  j["lambda_panel"] = panel;
  j["points"] = r.points;
  j["tolerance"] = r.tolerance;
  j["max_residual"] = r.max_normalized();
  j["max_abs_residual"] = r.max_abs();
  Json eqs = Json::array();
  for (const auto& e : r.equations) {
    Json ej;
    ej["name"] = e.name;
    ej["max_abs"] = e.max_abs;
    ej["max_normalized"] = e.max_normalized;
    ej["pass"] = e.max_normalized <= r.tolerance;
    eqs.push_back(ej);
  }
  j["equations"] = eqs;
  j["verdict"] = r.pass() ? "pass" : "fail";
  return j;
}

}  // namespace heavenly
