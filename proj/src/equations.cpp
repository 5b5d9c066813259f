#include "heavenly/equations.hpp"

#include <algorithm>
#include <cmath>

namespace heavenly {

namespace {

Expr var(const std::string& n) { return Expr::variable(n); }

Chart chart_x(int n) {
  std::vector<std::string> v;
  for (int i = 1; i <= n; ++i) v.push_back("x" + std::to_string(i));
  return Chart(v);
}

const Chart kChartI4{{"r", "s", "z", "w"}};
const Chart kChartI5{{"r", "s", "z", "w", "u"}};
const Chart kChartII4{{"x", "y", "z", "w"}};
const Chart kChartII5{{"x", "y", "z", "w", "u"}};

std::vector<std::string> labels(const std::vector<std::vector<int>>& sets) {
  std::vector<std::string> out;
  for (const auto& s : sets) {
    std::string l = "eq";
    for (int i : s) l += std::to_string(i);
    out.push_back(l);
  }
  return out;
}

const std::vector<std::vector<int>> kHirotaTriples{{1, 2, 3}, {1, 2, 4}, {1, 3, 4}, {2, 3, 4}};
const std::vector<std::vector<int>> kSchiefQuads{{1, 2, 3, 4}, {1, 2, 3, 5}, {1, 2, 4, 5}, {1, 3, 4, 5}, {2, 3, 4, 5}};

}  // namespace

DerivativeSource derivatives_of(const Expr& key) {
  return [key](const std::vector<std::string>& vars) { return diff(key, vars); };
}

std::string jet_symbol(const std::string& stem, std::vector<std::string> vars) {
  std::sort(vars.begin(), vars.end());
  std::string s = stem;
  if (!vars.empty()) s += "_";
  for (const auto& v : vars) s += v;
  return s;
}

DerivativeSource jet_symbols(const std::string& stem) {
  return [stem](const std::vector<std::string>& vars) { return Expr::variable(jet_symbol(stem, vars)); };
}

const std::vector<SystemInfo>& systems() {
  static const std::vector<SystemInfo> table = [] {
    std::vector<SystemInfo> t;
    auto hir = labels(kHirotaTriples);
    hir.push_back("heav");
    t.push_back({"heav4", "general heavenly equation", chart_x(4), 4, {"heav"}});
    t.push_back({"hirota4", "4D dispersionless Hirota system with the heavenly equation", chart_x(4), 5, hir});
    t.push_back({"schief5", "5D general heavenly system", chart_x(5), 5, labels(kSchiefQuads)});
    t.push_back({"sep5", "separation residual f_ij = f_ij5", chart_x(5), 0,
                 {"eq12", "eq13", "eq14", "eq23", "eq24", "eq34"}});
    t.push_back({"pleb1", "first Plebanski equation", kChartI4, 0, {"eq1"}});
    t.push_back({"ih5d", "5D first heavenly system", kChartI5, 0, {"eq1", "eq2", "eq3"}});
    t.push_back({"ihadd", "consequences of the 5D first heavenly system", kChartI5, 0, {"eq1", "eq2"}});
    t.push_back({"ihirota4", "Hirota system of the first heavenly framework", kChartI4, 0, {"eq1", "eq2", "eq3"}});
    t.push_back({"pleb2", "second Plebanski equation", kChartII4, 0, {"eq1"}});
    t.push_back({"iih5d", "5D second heavenly system", kChartII5, 0, {"eq1", "eq2", "eq3"}});
    t.push_back({"iihirota4", "Hirota system of the second heavenly framework", kChartII4, 0, {"eq1", "eq2", "eq3"}});
    t.push_back({"ppwave", "pp-wave reduction yF_yy + wF_wy + F_ww", kChartII4, 0, {"eq1"}});
    return t;
  }();
  return table;
}

const SystemInfo& system_info(const std::string& id) {
  for (const auto& s : systems())
    if (s.id == id) return s;
  throw std::invalid_argument("unknown system id '" + id + "'");
}

std::vector<Rational> default_lambdas(std::size_t count) {
  std::vector<Rational> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(static_cast<int>(i));
  return out;
}

namespace {

Expr heav_pattern(const DerivativeSource& d, const std::vector<std::string>& x, const std::vector<Expr>& l, int a, int b,
                  int c, int e) {
  auto L = [&](int i) { return l[static_cast<std::size_t>(i - 1)]; };
  auto F = [&](int i, int j) { return d({x[static_cast<std::size_t>(i - 1)], x[static_cast<std::size_t>(j - 1)]}); };
  return (L(a) - L(b)) * (L(c) - L(e)) * F(a, b) * F(c, e) - (L(a) - L(c)) * (L(b) - L(e)) * F(a, c) * F(b, e) +
         (L(a) - L(e)) * (L(b) - L(c)) * F(a, e) * F(b, c);
}

Expr hiro_pattern(const DerivativeSource& d, const std::vector<std::string>& x, const std::vector<Expr>& l, int a, int b,
                  int c) {
  auto L = [&](int i) { return l[static_cast<std::size_t>(i - 1)]; };
  auto F1 = [&](int i) { return d({x[static_cast<std::size_t>(i - 1)]}); };
  auto F = [&](int i, int j) { return d({x[static_cast<std::size_t>(i - 1)], x[static_cast<std::size_t>(j - 1)]}); };
  return F1(a) * F(b, c) * (L(a) - L(5)) * (L(b) - L(c)) + F1(b) * F(c, a) * (L(b) - L(5)) * (L(c) - L(a)) +
         F1(c) * F(a, b) * (L(c) - L(5)) * (L(a) - L(b));
}

}  // namespace

std::vector<NamedExpr> system_equations(const std::string& id, const DerivativeSource& d,
                                        const std::vector<Rational>& lambdas) {
  const SystemInfo& info = system_info(id);
  if (lambdas.size() < info.lambda_count)
    throw std::invalid_argument("system " + id + " needs " + std::to_string(info.lambda_count) + " lambda values");
  for (std::size_t i = 0; i < info.lambda_count; ++i)
    for (std::size_t j = i + 1; j < info.lambda_count; ++j)
      if (lambdas[i] == lambdas[j])
        throw LambdaCollision("lambda" + std::to_string(i + 1) + " equals lambda" + std::to_string(j + 1));
  std::vector<Expr> l;
  for (std::size_t i = 0; i < info.lambda_count; ++i) l.emplace_back(lambdas[i]);
  const auto& x = info.chart.names();
  auto D = [&](std::initializer_list<const char*> v) {
    std::vector<std::string> s;
    for (const char* c : v) s.emplace_back(c);
    return d(s);
  };
  std::vector<Expr> eqs;

  if (id == "heav4") {
    eqs.push_back(heav_pattern(d, x, l, 1, 2, 3, 4));
  } else if (id == "hirota4") {
    for (const auto& t : kHirotaTriples) eqs.push_back(hiro_pattern(d, x, l, t[0], t[1], t[2]));
    eqs.push_back(heav_pattern(d, x, l, 1, 2, 3, 4));
  } else if (id == "schief5") {
    for (const auto& q : kSchiefQuads) eqs.push_back(heav_pattern(d, x, l, q[0], q[1], q[2], q[3]));
  } else if (id == "sep5") {
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j)
        eqs.push_back(d({x[static_cast<std::size_t>(i)], x[static_cast<std::size_t>(j)]}) -
                      d({x[static_cast<std::size_t>(i)], x[static_cast<std::size_t>(j)], "x5"}));
  } else if (id == "pleb1") {
    eqs.push_back(D({"s", "z"}) * D({"r", "w"}) - D({"r", "z"}) * D({"s", "w"}) - Expr(1));
  } else if (id == "ih5d") {
    eqs.push_back(D({"s", "z"}) * D({"r", "w"}) - D({"r", "z"}) * D({"s", "w"}) - Expr(1));
    eqs.push_back(D({"r", "w"}) * D({"z", "w"}) - D({"r", "z"}) * D({"w", "w"}) + D({"r", "u"}));
    eqs.push_back(D({"s", "w"}) * D({"z", "w"}) - D({"s", "z"}) * D({"w", "w"}) + D({"s", "u"}));
  } else if (id == "ihadd") {
    eqs.push_back(D({"s", "z"}) * D({"r", "u"}) - D({"r", "z"}) * D({"s", "u"}) + D({"z", "w"}));
    eqs.push_back(D({"s", "w"}) * D({"r", "u"}) - D({"s", "u"}) * D({"r", "w"}) + D({"w", "w"}));
  } else if (id == "ihirota4") {
    Expr s = var("s"), w = var("w");
    eqs.push_back(D({"s", "z"}) * D({"r", "w"}) - D({"r", "z"}) * D({"s", "w"}) - Expr(1));
    eqs.push_back(D({"z", "w"}) * D({"r", "w"}) - D({"r", "z"}) * D({"w", "w"}) - s * D({"r", "s"}) -
                  w * D({"r", "w"}) + D({"r"}));
    eqs.push_back(D({"s", "w"}) * D({"z", "w"}) - D({"s", "z"}) * D({"w", "w"}) - s * D({"s", "s"}) -
                  w * D({"s", "w"}));
  } else if (id == "pleb2") {
    eqs.push_back(D({"x", "x"}) * D({"y", "y"}) - pow(D({"x", "y"}), 2) + D({"x", "w"}) + D({"y", "z"}));
  } else if (id == "iih5d") {
    eqs.push_back(D({"x", "x"}) * D({"y", "y"}) - pow(D({"x", "y"}), 2) + D({"x", "w"}) + D({"y", "z"}));
    eqs.push_back(-D({"x", "w"}) * D({"x", "y"}) + D({"x", "x"}) * D({"y", "w"}) + D({"x", "u"}) + D({"z", "w"}));
    eqs.push_back(D({"x", "w"}) * D({"y", "y"}) - D({"x", "y"}) * D({"y", "w"}) + D({"w", "w"}) - D({"y", "u"}));
  } else if (id == "iihirota4") {
    Expr y = var("y"), w = var("w");
    eqs.push_back(D({"x", "x"}) * D({"y", "y"}) - pow(D({"x", "y"}), 2) + D({"x", "w"}) + D({"y", "z"}));
    eqs.push_back(-D({"x", "w"}) * D({"x", "y"}) + D({"x", "x"}) * D({"y", "w"}) - y * D({"x", "y"}) -
                  w * D({"w", "x"}) + D({"w", "z"}) + D({"x"}));
    eqs.push_back(D({"x", "w"}) * D({"y", "y"}) - D({"x", "y"}) * D({"y", "w"}) + y * D({"y", "y"}) +
                  w * D({"w", "y"}) + D({"w", "w"}));
  } else if (id == "ppwave") {
    eqs.push_back(var("y") * D({"y", "y"}) + var("w") * D({"w", "y"}) + D({"w", "w"}));
  }

  std::vector<NamedExpr> out;
  for (std::size_t i = 0; i < eqs.size(); ++i) out.push_back({info.equations[i], eqs[i]});
  return out;
}

ResidualReport residual(const std::string& id, const Expr& key, const std::vector<Rational>& lambdas,
                        const std::vector<Point>& sample, const Bindings& bindings, double tolerance) {
  const SystemInfo& info = system_info(id);
  for (const auto& v : free_variables(key))
    if (!info.chart.contains(v))
      throw ChartMismatch("key function variable '" + v + "' is not a coordinate of system " + id);
  std::vector<ResidualGroup> groups;
  for (auto& ne : system_equations(id, derivatives_of(key), lambdas)) groups.push_back({ne.name, {ne.expr}});
  ResidualReport r = measure_residuals(id, groups, sample, bindings, tolerance);
  r.lambda_panel.assign(lambdas.begin(), lambdas.begin() + static_cast<std::ptrdiff_t>(info.lambda_count));
  return r;
}

Domain default_domain(const std::string& id) {
  const SystemInfo& info = system_info(id);
  std::vector<Interval> box;
  // second-framework charts: keep 4y - w^2 (and 4yu - w^2) well positive
  const bool second = info.chart.contains("x") && info.chart.contains("y");
  for (const auto& n : info.chart.names()) {
    if (second && (n == "x" || n == "w")) box.push_back({n, -0.5, 0.5});
    else box.push_back({n, 0.5, 1.5});
  }
  return Domain(box);
}

// ---- jets -------------------------------------------------------------------

Jet<Rational> random_rational_jet(Rng& rng, const std::vector<std::string>& coords, int order) {
  Jet<Rational> jet;
  std::vector<std::vector<std::string>> layer{{}};
  for (int k = 1; k <= order; ++k) {
    std::vector<std::vector<std::string>> next;
    for (const auto& base : layer) {
      for (std::size_t i = 0; i < coords.size(); ++i) {
        if (!base.empty() && coords[i] < base.back()) continue;
        auto v = base;
        v.push_back(coords[i]);
        std::string key = jet_symbol("f", v);
        if (!jet.count(key)) jet[key] = rng.rational(-5, 5, 7);
        next.push_back(v);
      }
    }
    layer = std::move(next);
  }
  return jet;
}

Jet<double> to_double(const Jet<Rational>& jet) {
  Jet<double> out;
  for (const auto& [k, v] : jet) out[k] = heavenly::to_double(v);
  return out;
}

namespace {

struct DependenceTerms {
  Expr lhs;
  std::vector<Expr> rhs_terms;
};

DependenceTerms dependence_terms(const std::vector<Rational>& lambdas) {
  auto eqs = system_equations("hirota4", jet_symbols("f"), lambdas);
  auto f = [](const char* n) { return Expr::variable(jet_symbol("f", {n})); };
  auto L = [&](int i) { return Expr(lambdas[static_cast<std::size_t>(i - 1)]); };
  DependenceTerms t;
  t.lhs = f("x1") * (L(1) - L(5)) * eqs[3].expr;
  t.rhs_terms = {f("x4") * (L(4) - L(5)) * eqs[0].expr, -f("x3") * (L(3) - L(5)) * eqs[1].expr,
                 f("x2") * (L(2) - L(5)) * eqs[2].expr};
  return t;
}

void dependence_guard(const Rational& f1, const std::vector<Rational>& lambdas) {
  if (lambdas.size() < 5) throw std::invalid_argument("dependence check needs five lambda values");
  if (f1 == 0) throw GuardViolation("dependence identity divides by f_1, which vanishes on this jet");
  if (lambdas[0] == lambdas[4]) throw GuardViolation("dependence identity divides by lambda1 - lambda5 = 0");
}

}  // namespace

Rational hirota_dependence_exact(const Jet<Rational>& jet, const std::vector<Rational>& lambdas) {
  auto it = jet.find(jet_symbol("f", {"x1"}));
  if (it == jet.end()) throw UnboundSymbol("f_x1");
  dependence_guard(it->second, lambdas);
  auto t = dependence_terms(lambdas);
  Expr diffe = t.lhs - make_sum(t.rhs_terms);
  ExactPoint p(jet.begin(), jet.end());
  auto v = eval_exact(diffe, p);
  return *v;
}

double hirota_dependence_check(const Jet<double>& jet, const std::vector<Rational>& lambdas) {
  auto it = jet.find(jet_symbol("f", {"x1"}));
  if (it == jet.end()) throw UnboundSymbol("f_x1");
  if (it->second == 0.0) throw GuardViolation("dependence identity divides by f_1, which vanishes on this jet");
  dependence_guard(1, lambdas);
  auto t = dependence_terms(lambdas);
  std::vector<Expr> outs{t.lhs};
  outs.insert(outs.end(), t.rhs_terms.begin(), t.rhs_terms.end());
  std::vector<std::string> names;
  for (const auto& [k, v] : jet) names.push_back(k);
  Program prog(outs, names);
  auto v = prog.run(Point(jet.begin(), jet.end()));
  double r = v[0] - (v[1] + v[2] + v[3]);
  double scale = 0.0;
  for (double x : v) scale = std::max(scale, std::fabs(x));
  return std::fabs(r) / (1.0 + scale);
}

std::vector<std::vector<Expr>> hirota_skew_matrix(const std::vector<Rational>& lambdas) {
  auto eqs = system_equations("hirota4", jet_symbols("f"), lambdas);
  const char* vars[4] = {"x4", "x3", "x2", "x1"};
  const auto& l = lambdas;
  Rational D[4] = {-(l[4] - l[3]), l[4] - l[2], -(l[4] - l[1]), l[4] - l[0]};
  std::vector<std::vector<Expr>> M(4, std::vector<Expr>(4));
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      M[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          diff(eqs[static_cast<std::size_t>(i)].expr, jet_symbol("f", {vars[j]})) / Expr(D[j]);
  return M;
}

namespace {
Expr pfaffian4(const std::vector<std::vector<Expr>>& M) {
  return M[0][1] * M[2][3] - M[0][2] * M[1][3] + M[0][3] * M[1][2];
}
}  // namespace

PfaffianCalibration calibrate_pfaffian(const Jet<Rational>& jet, const std::vector<Rational>& lambdas) {
  Expr pf = pfaffian4(hirota_skew_matrix(lambdas));
  Expr heav = system_equations("hirota4", jet_symbols("f"), lambdas)[4].expr;
  ExactPoint p(jet.begin(), jet.end());
  Rational h = *eval_exact(heav, p);
  if (h == 0) throw GuardViolation("calibration jet annihilates the heavenly expression");
  return {*eval_exact(pf, p) / h, jet};
}

double pfaffian_check(const Jet<double>& jet, const std::vector<Rational>& lambdas, const Rational& kappa) {
  Expr pf = pfaffian4(hirota_skew_matrix(lambdas));
  Expr heav = Expr(kappa) * system_equations("hirota4", jet_symbols("f"), lambdas)[4].expr;
  std::vector<std::string> names;
  for (const auto& [k, v] : jet) names.push_back(k);
  Program prog({pf, heav}, names);
  auto v = prog.run(Point(jet.begin(), jet.end()));
  return std::fabs(v[0] - v[1]) / (1.0 + std::fabs(v[0]) + std::fabs(v[1]));
}

Jet<Rational> ih5d_solution_jet(Rng& rng) {
  Jet<Rational> j;
  auto T = [](const char* a, const char* b) { return jet_symbol("T", {a, b}); };
  auto nonzero = [&] {
    Rational q;
    do q = rng.rational(-5, 5, 7);
    while (q == 0);
    return q;
  };
  Rational rz = rng.rational(-5, 5, 7), rw = nonzero(), sw = rng.rational(-5, 5, 7), zw = rng.rational(-5, 5, 7),
           ww = rng.rational(-5, 5, 7);
  Rational sz = (1 + rz * sw) / rw;
  j[T("r", "z")] = rz;
  j[T("r", "w")] = rw;
  j[T("s", "w")] = sw;
  j[T("z", "w")] = zw;
  j[T("w", "w")] = ww;
  j[T("s", "z")] = sz;
  j[T("r", "u")] = rz * ww - rw * zw;
  j[T("s", "u")] = sz * ww - sw * zw;
  return j;
}

// ---- Mason-Newman -----------------------------------------------------------

MasonNewman mason_newman_fields(MNFramework framework, const Expr& key) {
  const Chart& chart = framework == MNFramework::I4D ? kChartI4 : kChartI5;
  for (const auto& v : free_variables(key))
    if (!chart.contains(v)) throw ChartMismatch("key function variable '" + v + "' is not on the Mason-Newman chart");
  auto D = [&](const char* a, const char* b) { return diff(key, std::vector<std::string>{a, b}); };
  auto lam = [](const Expr& c) { return LambdaPoly::monomial(c, 1); };
  auto field = [&](std::map<std::string, LambdaPoly> comps) {
    std::vector<LambdaPoly> c(chart.dim());
    for (auto& [n, p] : comps) c[static_cast<std::size_t>(chart.index_of(n))] = p;
    return LambdaVectorField(chart, std::move(c));
  };
  MasonNewman mn;
  if (framework == MNFramework::I4D) {
    mn.fields.push_back(field({{"w", lam(1)}, {"r", D("s", "w")}, {"s", -D("r", "w")}}));
    mn.fields.push_back(field({{"z", lam(1)}, {"r", D("s", "z")}, {"s", -D("r", "z")}}));
  } else {
    mn.fields.push_back(field({{"r", D("s", "u")}, {"s", -D("r", "u")}, {"w", Expr(-1)}, {"u", lam(1)}}));
    mn.fields.push_back(field({{"r", D("s", "w")}, {"s", -D("r", "w")}, {"w", lam(1)}}));
    mn.fields.push_back(field({{"r", D("s", "z")}, {"s", -D("r", "z")}, {"z", lam(1)}}));
  }
  mn.volume = LambdaPolyForm::monomial(chart, chart.names(), LambdaPoly(Expr(1)));
  return mn;
}

ResidualReport commutator_check(const std::vector<LambdaVectorField>& fields, const std::vector<Point>& sample,
                                const Bindings& bindings, double tolerance) {
  std::vector<ResidualGroup> groups;
  int maxdeg = 0;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    for (std::size_t j = i + 1; j < fields.size(); ++j) {
      LambdaVectorField c = commutator(fields[i], fields[j]);
      auto panel = lambda_panel(static_cast<std::size_t>(std::max(c.lambda_degree(), 0) + 1));
      maxdeg = std::max(maxdeg, c.lambda_degree());
      std::string base = "[X" + std::to_string(i + 1) + ",X" + std::to_string(j + 1) + "]";
      for (std::size_t k = 0; k < c.chart().dim(); ++k) {
        ResidualGroup g{base + ".d" + c.chart().name(k), {}};
        for (const auto& l : panel) g.exprs.push_back(c.component(k).at(l));
        if (!c.component(k).is_zero()) groups.push_back(std::move(g));
        else groups.push_back({g.name, {Expr()}});
      }
    }
  }
  ResidualReport r = measure_residuals("commutators", groups, sample, bindings, tolerance);
  r.lambda_panel = lambda_panel(static_cast<std::size_t>(maxdeg + 1));
  return r;
}

ResidualReport divergence_check(const std::vector<LambdaVectorField>& fields, const LambdaPolyForm& volume,
                                const std::vector<Point>& sample, const Bindings& bindings, double tolerance) {
  std::vector<ResidualGroup> groups;
  int maxdeg = 0;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    LambdaPolyForm div = d_exterior(interior(fields[i], volume));
    maxdeg = std::max(maxdeg, div.lambda_degree());
    auto g = identity_groups(div, lambda_panel(static_cast<std::size_t>(std::max(div.lambda_degree(), 0) + 1)),
                             "X" + std::to_string(i + 1) + ".");
    if (g.empty()) g.push_back({"X" + std::to_string(i + 1), {Expr()}});
    groups.insert(groups.end(), g.begin(), g.end());
  }
  ResidualReport r = measure_residuals("divergence", groups, sample, bindings, tolerance);
  r.lambda_panel = lambda_panel(static_cast<std::size_t>(maxdeg + 1));
  return r;
}

// ---- separation -------------------------------------------------------------

ResidualReport separation_check(const Expr& h, const UnaryFunction& q, const std::vector<Rational>& lambdas,
                                const std::vector<Point>& sample, double tolerance) {
  Expr x5 = Expr::variable("x5");
  Expr qx = q.apply(x5), dq = q.apply(x5, 1);
  Expr f = h * qx;
  auto five = system_equations("schief5", derivatives_of(f), lambdas);
  auto four = system_equations("hirota4", derivatives_of(h), lambdas);
  // eq1234 <-> heav, eq1235 <-> eq123, eq1245 <-> eq124, eq1345 <-> eq134, eq2345 <-> eq234
  const std::size_t match[5] = {4, 0, 1, 2, 3};
  std::vector<ResidualGroup> groups;
  for (std::size_t i = 0; i < 5; ++i) {
    Expr factor = i == 0 ? qx * qx : qx * dq;
    groups.push_back({five[i].name + "-" + four[match[i]].name, {five[i].expr - factor * four[match[i]].expr}});
  }
  ResidualReport r = measure_residuals("separation", groups, sample, {}, tolerance);
  r.lambda_panel.assign(lambdas.begin(), lambdas.begin() + 5);
  return r;
}

}  // namespace heavenly
