#pragma once

#include "heavenly/eval.hpp"

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

namespace heavenly {

using Json = nlohmann::ordered_json;

struct EquationResidual {
  std::string name;
  double max_abs = 0.0;
  double max_normalized = 0.0;  // |r| / (1 + max |summand|)
};

struct ResidualReport {
  std::string id;
  std::vector<EquationResidual> equations;
  std::vector<Rational> lambda_panel;
  std::size_t points = 0;
  double tolerance = 1e-8;

  bool pass() const;
  double max_normalized() const;
  double max_abs() const;
  const EquationResidual& equation(const std::string& name) const;
};

// A named residual together with the expressions whose values it covers
// (for example one form coefficient at several panel values of lambda).
struct ResidualGroup {
  std::string name;
  std::vector<Expr> exprs;
};

ResidualReport measure_residuals(const std::string& id, const std::vector<ResidualGroup>& groups,
                                 const std::vector<Point>& points, const Bindings& bindings, double tolerance);

Json to_json(const ResidualReport& r);
std::string format_number(double v);
Json rational_json(const Rational& q);

}  // namespace heavenly
