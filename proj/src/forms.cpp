#include "heavenly/forms.hpp"

#include "heavenly/sampling.hpp"

#include <algorithm>
#include <cmath>

namespace heavenly {

// ---- Chart ----------------------------------------------------------------

Chart::Chart(std::vector<std::string> names) : names_(std::move(names)) {
  for (std::size_t i = 0; i < names_.size(); ++i)
    for (std::size_t j = i + 1; j < names_.size(); ++j)
      if (names_[i] == names_[j]) throw std::invalid_argument("duplicate chart coordinate '" + names_[i] + "'");
}

int Chart::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return static_cast<int>(i);
  throw std::invalid_argument("unknown coordinate '" + name + "'");
}

bool Chart::contains(const std::string& name) const {
  return std::find(names_.begin(), names_.end(), name) != names_.end();
}

Chart Chart::without(const std::string& name) const {
  index_of(name);
  std::vector<std::string> out;
  for (const auto& n : names_)
    if (n != name) out.push_back(n);
  return Chart(out);
}

// ---- LambdaPoly -------------------------------------------------------------

LambdaPoly::LambdaPoly(const Expr& constant) : coeffs_{constant} { trim(); }

LambdaPoly::LambdaPoly(std::vector<Expr> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

LambdaPoly LambdaPoly::monomial(const Expr& c, int power) {
  std::vector<Expr> v(static_cast<std::size_t>(power) + 1);
  v.back() = c;
  return LambdaPoly(std::move(v));
}

void LambdaPoly::trim() {
  while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
}

Expr LambdaPoly::coeff(int k) const {
  if (k < 0 || k >= static_cast<int>(coeffs_.size())) return Expr();
  return coeffs_[static_cast<std::size_t>(k)];
}

Expr LambdaPoly::at(const Rational& lambda) const {
  std::vector<Expr> terms;
  Rational p = 1;
  for (const auto& c : coeffs_) {
    terms.push_back(Expr(p) * c);
    p *= lambda;
  }
  return make_sum(std::move(terms));
}

Expr LambdaPoly::homogenized(int degree, const Rational& mu0, const Rational& mu1) const {
  if (this->degree() > degree) throw std::invalid_argument("homogenization degree below polynomial degree");
  std::vector<Expr> terms;
  for (int k = 0; k <= this->degree(); ++k) {
    Rational w = 1;
    for (int i = 0; i < k; ++i) w *= mu1;
    for (int i = k; i < degree; ++i) w *= mu0;
    terms.push_back(Expr(w) * coeffs_[static_cast<std::size_t>(k)]);
  }
  return make_sum(std::move(terms));
}

LambdaPoly LambdaPoly::map(const std::function<Expr(const Expr&)>& f) const {
  std::vector<Expr> v;
  v.reserve(coeffs_.size());
  for (const auto& c : coeffs_) v.push_back(c.is_zero() ? c : f(c));
  return LambdaPoly(std::move(v));
}

LambdaPoly operator+(const LambdaPoly& a, const LambdaPoly& b) {
  std::vector<Expr> v(std::max(a.coeffs_.size(), b.coeffs_.size()));
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i < a.coeffs_.size()) v[i] = a.coeffs_[i];
    if (i < b.coeffs_.size()) v[i] = v[i] + b.coeffs_[i];
  }
  return LambdaPoly(std::move(v));
}

LambdaPoly operator-(const LambdaPoly& a) { return a.map([](const Expr& e) { return -e; }); }

LambdaPoly operator-(const LambdaPoly& a, const LambdaPoly& b) { return a + (-b); }

LambdaPoly operator*(const LambdaPoly& a, const LambdaPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<std::vector<Expr>> buckets(a.coeffs_.size() + b.coeffs_.size() - 1);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
    if (a.coeffs_[i].is_zero()) continue;
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) {
      if (b.coeffs_[j].is_zero()) continue;
      buckets[i + j].push_back(a.coeffs_[i] * b.coeffs_[j]);
    }
  }
  std::vector<Expr> v;
  v.reserve(buckets.size());
  for (auto& t : buckets) v.push_back(make_sum(std::move(t)));
  return LambdaPoly(std::move(v));
}

// ---- LambdaPolyForm ---------------------------------------------------------

namespace {

// Sorts idx in place; returns the permutation sign, or 0 on a repeated index.
int sort_sign(MultiIndex& idx) {
  int sign = 1;
  for (std::size_t i = 1; i < idx.size(); ++i) {
    for (std::size_t j = i; j > 0 && idx[j - 1] >= idx[j]; --j) {
      if (idx[j - 1] == idx[j]) return 0;
      std::swap(idx[j - 1], idx[j]);
      sign = -sign;
    }
  }
  for (std::size_t i = 1; i < idx.size(); ++i)
    if (idx[i - 1] == idx[i]) return 0;
  return sign;
}

void require_same_chart(const Chart& a, const Chart& b) {
  if (a != b) throw ChartMismatch("forms live on different charts");
}

}  // namespace

LambdaPolyForm::LambdaPolyForm(Chart chart, int degree) : chart_(std::move(chart)), degree_(degree) {
  if (degree < 0) throw std::invalid_argument("negative form degree");
}

LambdaPolyForm LambdaPolyForm::scalar(const Chart& chart, const LambdaPoly& c) {
  LambdaPolyForm f(chart, 0);
  f.add({}, c);
  return f;
}

LambdaPolyForm LambdaPolyForm::monomial(const Chart& chart, const std::vector<std::string>& names,
                                        const LambdaPoly& c) {
  LambdaPolyForm f(chart, static_cast<int>(names.size()));
  MultiIndex idx;
  for (const auto& n : names) idx.push_back(chart.index_of(n));
  f.add(idx, c);
  return f;
}

LambdaPolyForm LambdaPolyForm::differential(const Chart& chart, const Expr& f) {
  return d_exterior(scalar(chart, LambdaPoly(f)));
}

int LambdaPolyForm::lambda_degree() const {
  int d = -1;
  for (const auto& [idx, c] : terms_) d = std::max(d, c.degree());
  return d;
}

LambdaPoly LambdaPolyForm::coefficient(const MultiIndex& idx) const {
  MultiIndex s = idx;
  int sign = sort_sign(s);
  if (sign == 0) return {};
  auto it = terms_.find(s);
  if (it == terms_.end()) return {};
  return sign > 0 ? it->second : -it->second;
}

LambdaPoly LambdaPolyForm::coefficient(const std::vector<std::string>& names) const {
  MultiIndex idx;
  for (const auto& n : names) idx.push_back(chart_.index_of(n));
  return coefficient(idx);
}

void LambdaPolyForm::add(MultiIndex idx, const LambdaPoly& c) {
  if (static_cast<int>(idx.size()) != degree_) throw std::invalid_argument("multi-index length differs from form degree");
  for (int i : idx)
    if (i < 0 || i >= static_cast<int>(chart_.dim())) throw std::out_of_range("multi-index outside chart");
  int sign = sort_sign(idx);
  if (sign == 0 || c.is_zero()) return;
  auto it = terms_.find(idx);
  LambdaPoly value = sign > 0 ? c : -c;
  if (it == terms_.end()) {
    terms_.emplace(std::move(idx), value);
    return;
  }
  it->second = it->second + value;
  if (it->second.is_zero()) terms_.erase(it);
}

LambdaPolyForm LambdaPolyForm::map(const std::function<Expr(const Expr&)>& f) const {
  LambdaPolyForm out(chart_, degree_);
  for (const auto& [idx, c] : terms_) out.add(idx, c.map(f));
  return out;
}

std::string LambdaPolyForm::index_label(const MultiIndex& idx) const {
  if (idx.empty()) return "1";
  std::string s;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (i) s += "^";
    s += "d" + chart_.name(static_cast<std::size_t>(idx[i]));
  }
  return s;
}

LambdaPolyForm operator+(const LambdaPolyForm& a, const LambdaPolyForm& b) {
  require_same_chart(a.chart_, b.chart_);
  if (a.degree_ != b.degree_) throw std::invalid_argument("adding forms of different degree");
  LambdaPolyForm out = a;
  for (const auto& [idx, c] : b.terms_) out.add(idx, c);
  return out;
}

LambdaPolyForm operator-(const LambdaPolyForm& a) { return a.map([](const Expr& e) { return -e; }); }

LambdaPolyForm operator-(const LambdaPolyForm& a, const LambdaPolyForm& b) { return a + (-b); }

LambdaPolyForm operator*(const LambdaPoly& c, const LambdaPolyForm& a) {
  LambdaPolyForm out(a.chart_, a.degree_);
  for (const auto& [idx, t] : a.terms_) out.add(idx, c * t);
  return out;
}

// ---- LambdaVectorField ------------------------------------------------------

LambdaVectorField::LambdaVectorField(Chart chart, std::vector<LambdaPoly> components)
    : chart_(std::move(chart)), comps_(std::move(components)) {
  if (comps_.size() != chart_.dim()) throw std::invalid_argument("vector field component count differs from chart dimension");
}

LambdaVectorField LambdaVectorField::coordinate(const Chart& chart, const std::string& name) {
  std::vector<LambdaPoly> c(chart.dim());
  c[static_cast<std::size_t>(chart.index_of(name))] = LambdaPoly(Expr(1));
  return LambdaVectorField(chart, std::move(c));
}

int LambdaVectorField::lambda_degree() const {
  int d = -1;
  for (const auto& c : comps_) d = std::max(d, c.degree());
  return d;
}

LambdaPoly LambdaVectorField::apply(const LambdaPoly& f) const {
  LambdaPoly out;
  for (std::size_t i = 0; i < comps_.size(); ++i) {
    if (comps_[i].is_zero()) continue;
    const std::string& v = chart_.name(i);
    out = out + comps_[i] * f.map([&](const Expr& e) { return diff(e, v); });
  }
  return out;
}

LambdaVectorField operator+(const LambdaVectorField& a, const LambdaVectorField& b) {
  require_same_chart(a.chart_, b.chart_);
  std::vector<LambdaPoly> c(a.comps_.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.comps_[i] + b.comps_[i];
  return LambdaVectorField(a.chart_, std::move(c));
}

LambdaVectorField operator*(const LambdaPoly& c, const LambdaVectorField& v) {
  std::vector<LambdaPoly> out;
  for (const auto& x : v.comps_) out.push_back(c * x);
  return LambdaVectorField(v.chart_, std::move(out));
}

// ---- operations -------------------------------------------------------------

LambdaPolyForm wedge(const LambdaPolyForm& a, const LambdaPolyForm& b) {
  require_same_chart(a.chart(), b.chart());
  int k = a.degree() + b.degree();
  LambdaPolyForm out(a.chart(), k);
  if (k > static_cast<int>(a.chart().dim())) return out;
  for (const auto& [ia, ca] : a.terms()) {
    for (const auto& [ib, cb] : b.terms()) {
      MultiIndex idx = ia;
      idx.insert(idx.end(), ib.begin(), ib.end());
      out.add(idx, ca * cb);
    }
  }
  return out;
}

LambdaPolyForm d_exterior(const LambdaPolyForm& a) {
  const Chart& ch = a.chart();
  LambdaPolyForm out(ch, a.degree() + 1);
  if (a.degree() + 1 > static_cast<int>(ch.dim())) return out;
  for (const auto& [idx, c] : a.terms()) {
    for (std::size_t j = 0; j < ch.dim(); ++j) {
      if (std::find(idx.begin(), idx.end(), static_cast<int>(j)) != idx.end()) continue;
      const std::string& v = ch.name(j);
      LambdaPoly dc = c.map([&](const Expr& e) { return diff(e, v); });
      if (dc.is_zero()) continue;
      MultiIndex nidx{static_cast<int>(j)};
      nidx.insert(nidx.end(), idx.begin(), idx.end());
      out.add(nidx, dc);
    }
  }
  return out;
}

LambdaPolyForm interior(const LambdaVectorField& v, const LambdaPolyForm& a) {
  require_same_chart(v.chart(), a.chart());
  if (a.degree() == 0) throw std::invalid_argument("interior product of a 0-form");
  LambdaPolyForm out(a.chart(), a.degree() - 1);
  for (const auto& [idx, c] : a.terms()) {
    for (std::size_t m = 0; m < idx.size(); ++m) {
      const LambdaPoly& vc = v.component(static_cast<std::size_t>(idx[m]));
      if (vc.is_zero()) continue;
      MultiIndex rest;
      for (std::size_t k = 0; k < idx.size(); ++k)
        if (k != m) rest.push_back(idx[k]);
      LambdaPoly t = vc * c;
      out.add(rest, (m % 2 == 0) ? t : -t);
    }
  }
  return out;
}

LambdaPolyForm lie_derivative(const LambdaVectorField& v, const LambdaPolyForm& a) {
  require_same_chart(v.chart(), a.chart());
  LambdaPolyForm out = interior(v, d_exterior(a));
  if (a.degree() > 0) out = out + d_exterior(interior(v, a));
  return out;
}

LambdaVectorField commutator(const LambdaVectorField& a, const LambdaVectorField& b) {
  require_same_chart(a.chart(), b.chart());
  std::vector<LambdaPoly> c(a.chart().dim());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.apply(b.component(i)) - b.apply(a.component(i));
  return LambdaVectorField(a.chart(), std::move(c));
}

LambdaPolyForm eval_at_lambda(const LambdaPolyForm& a, const Rational& lambda) {
  LambdaPolyForm out(a.chart(), a.degree());
  for (const auto& [idx, c] : a.terms()) out.add(idx, LambdaPoly(c.at(lambda)));
  return out;
}

LambdaPolyForm restrict(const LambdaPolyForm& a, const std::string& coord, const Rational& value) {
  int pos = a.chart().index_of(coord);
  LambdaPolyForm out(a.chart().without(coord), a.degree());
  for (const auto& [idx, c] : a.terms()) {
    if (std::find(idx.begin(), idx.end(), pos) != idx.end()) continue;
    MultiIndex n;
    for (int i : idx) n.push_back(i > pos ? i - 1 : i);
    out.add(n, c.map([&](const Expr& e) { return subst(e, coord, Expr(value)); }));
  }
  return out;
}

LambdaPolyForm substitute(const LambdaPolyForm& a, const std::map<std::string, Expr>& repl) {
  return a.map([&](const Expr& e) { return subst(e, repl); });
}

LambdaPolyForm bind(const LambdaPolyForm& a, const Bindings& bindings) {
  return a.map([&](const Expr& e) { return bind_functions(e, bindings); });
}

std::set<std::string> function_symbols(const LambdaPolyForm& a) {
  std::set<std::string> out;
  for (const auto& [idx, c] : a.terms())
    for (const auto& e : c.coeffs()) {
      auto s = function_symbols(e);
      out.insert(s.begin(), s.end());
    }
  return out;
}

// ---- zero testing and division -------------------------------------------

bool ZeroTest::is_zero(const Expr& e) const {
  if (e.is_zero()) return true;
  Expr bound = bind_functions(e, bindings);
  if (bound.is_zero()) return true;
  std::vector<Expr> outs{bound};
  for (const auto& t : summands(bound)) outs.push_back(t);
  auto fv = free_variables(bound);
  std::vector<std::string> names(fv.begin(), fv.end());
  Program prog(outs, names);
  std::size_t used = 0;
  for (const auto& p : points) {
    std::vector<double> v;
    try {
      v = prog.run(p);
    } catch (const DomainError&) {
      continue;
    }
    ++used;
    double scale = 0.0;
    for (std::size_t i = 1; i < v.size(); ++i) scale = std::max(scale, std::fabs(v[i]));
    if (std::fabs(v[0]) > tolerance * (1.0 + scale)) return false;
  }
  if (used * 2 < points.size() || used == 0)
    throw std::runtime_error("zero test could not evaluate " + e.str() + " at enough points");
  return true;
}

ZeroTest ZeroTest::generic(const std::set<std::string>& variables, const std::set<std::string>& symbols,
                           std::size_t count, std::uint64_t seed) {
  ZeroTest t;
  Rng rng(seed);
  for (std::size_t k = 0; k < count; ++k) {
    Point p;
    for (const auto& v : variables) p[v] = to_double(Rational(rng.integer(30, 170), 100));
    t.points.push_back(std::move(p));
  }
  // A function with no special derivative relations.
  UnaryFunction generic_fn{"t", parse("1 + t/3 + t^2/5 + exp(t/7)/2")};
  for (const auto& s : symbols) t.bindings[s] = generic_fn;
  return t;
}

NonDivisible::NonDivisible(const std::string& what, LambdaPolyForm remainder)
    : std::runtime_error(what), remainder_(std::move(remainder)) {}

LambdaPolyForm divide_linear(const LambdaPolyForm& a, const Rational& lambda0, const ZeroTest* test) {
  LambdaPolyForm quotient(a.chart(), a.degree());
  LambdaPolyForm remainder(a.chart(), a.degree());
  for (const auto& [idx, c] : a.terms()) {
    int D = c.degree();
    std::vector<Expr> q(static_cast<std::size_t>(std::max(D, 0)));
    Expr carry;
    for (int k = D; k >= 1; --k) {
      carry = c.coeff(k) + Expr(lambda0) * carry;
      q[static_cast<std::size_t>(k - 1)] = carry;
    }
    Expr r = c.coeff(0) + Expr(lambda0) * carry;
    quotient.add(idx, LambdaPoly(std::move(q)));
    remainder.add(idx, LambdaPoly(r));
  }
  if (!remainder.is_zero()) {
    ZeroTest fallback;
    if (!test) {
      std::set<std::string> vars(a.chart().names().begin(), a.chart().names().end());
      for (const auto& [idx, c] : remainder.terms()) {
        auto fv = free_variables(c.coeff(0));
        vars.insert(fv.begin(), fv.end());
      }
      fallback = ZeroTest::generic(vars, function_symbols(remainder));
      test = &fallback;
    }
    for (const auto& [idx, c] : remainder.terms()) {
      if (!test->is_zero(c.coeff(0)))
        throw NonDivisible("form is not divisible by (lambda - " + to_string(lambda0) + "): remainder coefficient of " +
                               remainder.index_label(idx) + " is " + c.coeff(0).str(),
                           remainder);
    }
  }
  return quotient;
}

// ---- identity testing -------------------------------------------------------

std::vector<Rational> lambda_panel(std::size_t count) {
  std::vector<Rational> out{0, 1, -1, 2, Rational(1, 2), -2, 3, Rational(-1, 2), Rational(1, 3), -3};
  for (int n = 4; out.size() < count; ++n) {
    out.push_back(n);
    out.push_back(Rational(1, n));
    out.push_back(-n);
  }
  out.resize(count);
  return out;
}

std::vector<ResidualGroup> identity_groups(const LambdaPolyForm& a, const std::vector<Rational>& panel,
                                           const std::string& prefix) {
  std::vector<ResidualGroup> groups;
  for (const auto& [idx, c] : a.terms()) {
    ResidualGroup g;
    g.name = prefix + a.index_label(idx);
    for (const auto& l : panel) g.exprs.push_back(c.at(l));
    groups.push_back(std::move(g));
  }
  return groups;
}

// ---- JSON -------------------------------------------------------------------

Json to_json(const LambdaPolyForm& a) {
  Json j;
  j["chart"] = a.chart().names();
  j["degree"] = a.degree();
  j["lambda_degree"] = a.lambda_degree();
  Json entries = Json::array();
  for (const auto& [idx, c] : a.terms()) {
    Json e;
    std::vector<std::string> names;
    for (int i : idx) names.push_back(a.chart().name(static_cast<std::size_t>(i)));
    e["index"] = names;
    std::vector<std::string> coeffs;
    for (const auto& x : c.coeffs()) coeffs.push_back(x.str());
    e["coefficients"] = coeffs;
    entries.push_back(e);
  }
  j["entries"] = entries;
  return j;
}

LambdaPolyForm form_from_json(const Json& j) {
  Chart chart(j.at("chart").get<std::vector<std::string>>());
  LambdaPolyForm f(chart, j.at("degree").get<int>());
  for (const auto& e : j.at("entries")) {
    MultiIndex idx;
    for (const auto& n : e.at("index")) idx.push_back(chart.index_of(n.get<std::string>()));
    std::vector<Expr> coeffs;
    for (const auto& c : e.at("coefficients")) coeffs.push_back(parse(c.get<std::string>()));
    f.add(idx, LambdaPoly(std::move(coeffs)));
  }
  return f;
}

}  // namespace heavenly
