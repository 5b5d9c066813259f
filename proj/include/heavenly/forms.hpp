#pragma once

#include "heavenly/eval.hpp"
#include "heavenly/report.hpp"

#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace heavenly {

class Chart {
 public:
  Chart() = default;
  explicit Chart(std::vector<std::string> names);

  std::size_t dim() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  const std::string& name(std::size_t i) const { return names_[i]; }
  int index_of(const std::string& name) const;  // throws std::invalid_argument
  bool contains(const std::string& name) const;
  Chart without(const std::string& name) const;

  friend bool operator==(const Chart& a, const Chart& b) { return a.names_ == b.names_; }
  friend bool operator!=(const Chart& a, const Chart& b) { return !(a == b); }

 private:
  std::vector<std::string> names_;
};

class ChartMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Polynomial in the spectral parameter with Expr coefficients, lowest power
// first. Trailing structurally-zero coefficients are trimmed.
class LambdaPoly {
 public:
  LambdaPoly() = default;
  LambdaPoly(const Expr& constant);
  explicit LambdaPoly(std::vector<Expr> coeffs);
  static LambdaPoly monomial(const Expr& c, int power);

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }  // -1 for zero
  bool is_zero() const { return coeffs_.empty(); }
  const std::vector<Expr>& coeffs() const { return coeffs_; }
  Expr coeff(int k) const;
  Expr at(const Rational& lambda) const;
  // Homogenized value mu0^D p(mu1/mu0) for a fixed formal degree D.
  Expr homogenized(int degree, const Rational& mu0, const Rational& mu1) const;

  LambdaPoly map(const std::function<Expr(const Expr&)>& f) const;

  friend LambdaPoly operator+(const LambdaPoly& a, const LambdaPoly& b);
  friend LambdaPoly operator-(const LambdaPoly& a, const LambdaPoly& b);
  friend LambdaPoly operator-(const LambdaPoly& a);
  friend LambdaPoly operator*(const LambdaPoly& a, const LambdaPoly& b);
  friend bool operator==(const LambdaPoly& a, const LambdaPoly& b) { return a.coeffs_ == b.coeffs_; }

 private:
  void trim();
  std::vector<Expr> coeffs_;
};

using MultiIndex = std::vector<int>;  // strictly increasing chart positions

class LambdaPolyForm {
 public:
  LambdaPolyForm() = default;
  LambdaPolyForm(Chart chart, int degree);

  static LambdaPolyForm scalar(const Chart& chart, const LambdaPoly& c);
  // c * dx^{names[0]} ^ dx^{names[1]} ^ ... (order of names matters for the sign)
  static LambdaPolyForm monomial(const Chart& chart, const std::vector<std::string>& names, const LambdaPoly& c);
  static LambdaPolyForm differential(const Chart& chart, const Expr& f);  // df

  const Chart& chart() const { return chart_; }
  int degree() const { return degree_; }
  int lambda_degree() const;
  bool is_zero() const { return terms_.empty(); }
  const std::map<MultiIndex, LambdaPoly>& terms() const { return terms_; }
  LambdaPoly coefficient(const MultiIndex& idx) const;
  LambdaPoly coefficient(const std::vector<std::string>& names) const;  // with permutation sign

  // Adds c * dx^{idx[0]} ^ ... for an arbitrary (possibly unsorted) index list.
  void add(MultiIndex idx, const LambdaPoly& c);

  LambdaPolyForm map(const std::function<Expr(const Expr&)>& f) const;
  std::string index_label(const MultiIndex& idx) const;  // "dr^ds"

  friend LambdaPolyForm operator+(const LambdaPolyForm& a, const LambdaPolyForm& b);
  friend LambdaPolyForm operator-(const LambdaPolyForm& a, const LambdaPolyForm& b);
  friend LambdaPolyForm operator-(const LambdaPolyForm& a);
  friend LambdaPolyForm operator*(const LambdaPoly& c, const LambdaPolyForm& a);

 private:
  Chart chart_;
  int degree_ = 0;
  std::map<MultiIndex, LambdaPoly> terms_;
};

class LambdaVectorField {
 public:
  LambdaVectorField() = default;
  LambdaVectorField(Chart chart, std::vector<LambdaPoly> components);
  static LambdaVectorField coordinate(const Chart& chart, const std::string& name);  // d/dname

  const Chart& chart() const { return chart_; }
  const std::vector<LambdaPoly>& components() const { return comps_; }
  const LambdaPoly& component(std::size_t i) const { return comps_[i]; }
  int lambda_degree() const;

  LambdaPoly apply(const LambdaPoly& f) const;  // directional derivative

  friend LambdaVectorField operator+(const LambdaVectorField& a, const LambdaVectorField& b);
  friend LambdaVectorField operator*(const LambdaPoly& c, const LambdaVectorField& v);

 private:
  Chart chart_;
  std::vector<LambdaPoly> comps_;
};

LambdaPolyForm wedge(const LambdaPolyForm& a, const LambdaPolyForm& b);
LambdaPolyForm d_exterior(const LambdaPolyForm& a);
LambdaPolyForm interior(const LambdaVectorField& v, const LambdaPolyForm& a);
LambdaPolyForm lie_derivative(const LambdaVectorField& v, const LambdaPolyForm& a);
LambdaVectorField commutator(const LambdaVectorField& a, const LambdaVectorField& b);
LambdaPolyForm eval_at_lambda(const LambdaPolyForm& a, const Rational& lambda);
LambdaPolyForm restrict(const LambdaPolyForm& a, const std::string& coord, const Rational& value);
LambdaPolyForm substitute(const LambdaPolyForm& a, const std::map<std::string, Expr>& repl);
LambdaPolyForm bind(const LambdaPolyForm& a, const Bindings& bindings);

// Numeric zero test used where an exact symbolic zero is not available:
// evaluation at sample points with any opaque symbols bound.
struct ZeroTest {
  std::vector<Point> points;
  Bindings bindings;
  double tolerance = 1e-9;

  bool is_zero(const Expr& e) const;
  // Rational points in [0.3, 1.7] for the given variables, and generic
  // bindings for the given opaque symbols.
  static ZeroTest generic(const std::set<std::string>& variables, const std::set<std::string>& symbols,
                          std::size_t count = 12, std::uint64_t seed = 7);
};

class NonDivisible : public std::runtime_error {
 public:
  NonDivisible(const std::string& what, LambdaPolyForm remainder);
  const LambdaPolyForm& remainder() const { return remainder_; }

 private:
  LambdaPolyForm remainder_;
};

// Quotient q with (lambda - lambda0) q = a. The remainder a(lambda0) must
// vanish: structurally, or under the zero test (a generic one when null).
LambdaPolyForm divide_linear(const LambdaPolyForm& a, const Rational& lambda0, const ZeroTest* test = nullptr);

std::set<std::string> function_symbols(const LambdaPolyForm& a);

// Distinct rational panel values: 0, 1, -1, 2, 1/2, -2, 3, -1/2, 1/3, -3, ...
std::vector<Rational> lambda_panel(std::size_t count);

// Residual groups for "a == 0 identically in lambda": one group per stored
// coefficient, holding its values at every panel point.
std::vector<ResidualGroup> identity_groups(const LambdaPolyForm& a, const std::vector<Rational>& panel,
                                           const std::string& prefix = "");

Json to_json(const LambdaPolyForm& a);
LambdaPolyForm form_from_json(const Json& j);

}  // namespace heavenly
