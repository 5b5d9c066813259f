#include "heavenly/gindikin.hpp"

#include <algorithm>
#include <cmath>

namespace heavenly {

GindikinCandidate::GindikinCandidate(LambdaPolyForm f) : form(std::move(f)) {
  if (form.degree() != 2) throw std::invalid_argument("Gindikin candidate must be a 2-form");
  int dim = static_cast<int>(form.chart().dim());
  expected_degree = dim - 2;
  panel = lambda_panel(static_cast<std::size_t>(std::max(expected_degree, form.lambda_degree()) + 1));
}

const Chart& chart_I4() {
  static const Chart c({"r", "s", "z", "w"});
  return c;
}
const Chart& chart_I5() {
  static const Chart c({"r", "s", "z", "w", "u"});
  return c;
}
const Chart& chart_II4() {
  static const Chart c({"x", "y", "z", "w"});
  return c;
}
const Chart& chart_II5() {
  static const Chart c({"x", "y", "z", "w", "u"});
  return c;
}
Chart chart_general(int n) {
  std::vector<std::string> v;
  for (int i = 1; i <= n; ++i) v.push_back("x" + std::to_string(i));
  return Chart(v);
}

namespace {

LambdaPoly linear_factor(const Rational& root) { return LambdaPoly(std::vector<Expr>{Expr(-root), Expr(1)}); }

LambdaPoly lam(const Expr& c, int k) { return LambdaPoly::monomial(c, k); }

LambdaPolyForm two(const Chart& ch, const char* a, const char* b, const LambdaPoly& c) {
  return LambdaPolyForm::monomial(ch, {a, b}, c);
}

LambdaPolyForm one(const Chart& ch, const char* a, const LambdaPoly& c) { return LambdaPolyForm::monomial(ch, {a}, c); }

void check_lambdas(const std::vector<Rational>& l, std::size_t n) {
  if (l.size() < n) throw std::invalid_argument("not enough lambda values");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (l[i] == l[j]) throw std::invalid_argument("lambda values must be pairwise distinct");
}

}  // namespace

LambdaPolyForm veronese_alpha(const Chart& chart, const Expr& f, const std::vector<Rational>& lambdas) {
  std::size_t n = chart.dim();
  check_lambdas(lambdas, n + 1);
  LambdaPolyForm a(chart, 1);
  for (std::size_t i = 0; i < n; ++i) {
    LambdaPoly p(Expr((lambdas[n] - lambdas[i])) * diff(f, chart.name(i)));
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) p = p * linear_factor(lambdas[j]);
    a.add({static_cast<int>(i)}, p);
  }
  return a;
}

LambdaPolyForm general_heavenly_beta(const Chart& chart, const Expr& f, const std::vector<Rational>& lambdas) {
  std::size_t n = chart.dim();
  check_lambdas(lambdas, n);
  LambdaPolyForm b(chart, 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      LambdaPoly p(Expr(lambdas[i] - lambdas[j]) * diff(f, std::vector<std::string>{chart.name(i), chart.name(j)}));
      for (std::size_t k = 0; k < n; ++k)
        if (k != i && k != j) p = p * linear_factor(lambdas[k]);
      b.add({static_cast<int>(i), static_cast<int>(j)}, p);
    }
  }
  return b;
}

LambdaPolyForm plebanski_I_beta(const Expr& t) {
  const Chart& c = chart_I4();
  auto D = [&](const char* a, const char* b) { return diff(t, std::vector<std::string>{a, b}); };
  return two(c, "r", "s", lam(1, 2)) + two(c, "r", "z", lam(D("r", "z"), 1)) + two(c, "r", "w", lam(D("r", "w"), 1)) +
         two(c, "s", "z", lam(D("s", "z"), 1)) + two(c, "s", "w", lam(D("s", "w"), 1)) + two(c, "z", "w", lam(-1, 0));
}

Coframe plebanski_I_coframe(const Expr& t) {
  const Chart& c = chart_I4();
  auto D = [&](const char* a, const char* b) { return diff(t, std::vector<std::string>{a, b}); };
  Coframe f;
  f.gamma0 = one(c, "w", lam(1, 0));
  f.gamma1 = one(c, "r", lam(D("r", "z"), 0)) + one(c, "s", lam(D("s", "z"), 0));
  f.delta0 = one(c, "z", lam(1, 0));
  f.delta1 = one(c, "r", lam(-D("r", "w"), 0)) + one(c, "s", lam(-D("s", "w"), 0));
  return f;
}

LambdaPolyForm plebanski_I_beta5(const Expr& T) {
  const Chart& c = chart_I5();
  auto D = [&](const char* a, const char* b) { return diff(T, std::vector<std::string>{a, b}); };
  return two(c, "r", "s", lam(1, 3)) + two(c, "r", "z", lam(D("r", "z"), 2)) + two(c, "r", "w", lam(D("r", "w"), 2)) +
         two(c, "r", "u", lam(D("r", "u"), 2)) + two(c, "s", "z", lam(D("s", "z"), 2)) +
         two(c, "s", "w", lam(D("s", "w"), 2)) + two(c, "s", "u", lam(D("s", "u"), 2)) +
         two(c, "r", "u", lam(D("r", "w"), 1)) + two(c, "s", "u", lam(D("s", "w"), 1)) + two(c, "z", "w", lam(-1, 1)) +
         two(c, "z", "u", lam(D("z", "w"), 1)) + two(c, "w", "u", lam(D("w", "w"), 1)) + two(c, "z", "u", lam(-1, 0));
}

LambdaPolyForm plebanski_II_beta(const Expr& t) {
  const Chart& c = chart_II4();
  LambdaPolyForm tx = LambdaPolyForm::differential(c, diff(t, "x"));
  LambdaPolyForm ty = LambdaPolyForm::differential(c, diff(t, "y"));
  LambdaPolyForm dw = one(c, "w", lam(1, 0)), dz = one(c, "z", lam(1, 0));
  LambdaPoly l2 = lam(1, 2);
  return two(c, "w", "z", lam(1, 0)) + two(c, "x", "w", lam(1, 1)) + two(c, "y", "z", lam(1, 1)) +
         two(c, "x", "y", l2) - l2 * wedge(dw, ty) + l2 * wedge(dz, tx);
}

LambdaPolyForm plebanski_II_beta5(const Expr& T) {
  const Chart& c = chart_II5();
  LambdaPolyForm Tx = LambdaPolyForm::differential(c, diff(T, "x"));
  LambdaPolyForm Ty = LambdaPolyForm::differential(c, diff(T, "y"));
  LambdaPolyForm Tw = LambdaPolyForm::differential(c, diff(T, "w"));
  LambdaPolyForm du = one(c, "u", lam(1, 0)), dz = one(c, "z", lam(1, 0)), dw = one(c, "w", lam(1, 0));
  LambdaPoly l2 = lam(1, 2), l3 = lam(1, 3);
  return two(c, "u", "z", lam(1, 0)) + two(c, "x", "u", lam(1, 1)) + two(c, "w", "z", lam(1, 1)) +
         two(c, "x", "w", l2) + two(c, "y", "z", l2) - l2 * wedge(du, Ty) + two(c, "x", "y", l3) +
         l3 * wedge(dz, Tx) - l3 * wedge(dw, Ty) - l3 * wedge(du, Tw);
}

LambdaPolyForm plebanski_I_alpha(const Expr& t) {
  const Chart& c = chart_I4();
  auto D = [&](const char* a, const char* b) { return diff(t, std::vector<std::string>{a, b}); };
  Expr s = Expr::variable("s"), w = Expr::variable("w");
  return one(c, "z", lam(1, 0)) + one(c, "r", lam(-D("r", "w"), 1)) + one(c, "s", lam(-D("s", "w"), 1)) +
         one(c, "z", lam(w - D("z", "w"), 1)) + one(c, "w", lam(-D("w", "w"), 1)) +
         one(c, "r", lam(s * D("r", "s") - diff(t, "r"), 2)) + one(c, "s", lam(s * D("s", "s"), 2)) +
         one(c, "z", lam(s * D("s", "z"), 2)) + one(c, "w", lam(s * D("s", "w"), 2)) + one(c, "r", lam(-s, 3));
}

LambdaPolyForm plebanski_II_alpha(const Expr& t) {
  const Chart& c = chart_II4();
  Expr y = Expr::variable("y"), w = Expr::variable("w");
  LambdaPolyForm dx = one(c, "x", lam(1, 0)), dz = one(c, "z", lam(1, 0));
  LambdaPolyForm dty = LambdaPolyForm::differential(c, diff(t, "y"));
  LambdaPolyForm dtw = LambdaPolyForm::differential(c, diff(t, "w"));
  LambdaPoly l1 = lam(1, 1), l2 = lam(1, 2), l3 = lam(1, 3);
  return dz + l1 * (LambdaPoly(w) * dz - dx) + l2 * (LambdaPoly(y) * dz - LambdaPoly(w) * dx - dty) +
         l3 * (LambdaPoly(-diff(t, "x")) * dz - LambdaPoly(y) * dx - LambdaPoly(w) * dty - dtw);
}

// ---- checks -----------------------------------------------------------------

namespace {

ResidualReport identity_report(const std::string& id, const LambdaPolyForm& f, const std::vector<Point>& sample,
                               const Bindings& bindings, double tolerance) {
  auto panel = lambda_panel(static_cast<std::size_t>(std::max(f.lambda_degree(), 0) + 1));
  auto groups = identity_groups(f, panel);
  ResidualReport r = measure_residuals(id, groups, sample, bindings, tolerance);
  r.lambda_panel = panel;
  return r;
}

}  // namespace

ResidualReport check_closed(const GindikinCandidate& g, const std::vector<Point>& sample, const Bindings& bindings,
                            double tolerance) {
  return identity_report("closed", d_exterior(g.form), sample, bindings, tolerance);
}

ResidualReport check_simple(const GindikinCandidate& g, const std::vector<Point>& sample, const Bindings& bindings,
                            double tolerance) {
  return identity_report("simple", wedge(g.form, g.form), sample, bindings, tolerance);
}

NondegeneracyReport check_nondegenerate(const GindikinCandidate& g, const std::vector<Point>& sample,
                                        const Bindings& bindings, double threshold) {
  NondegeneracyReport rep;
  rep.threshold = threshold;
  rep.points = sample.size();
  const auto& panel = g.panel;
  std::vector<LambdaPolyForm> at;
  for (const auto& l : panel) at.push_back(eval_at_lambda(g.form, l));
  // For each pair, the coefficients of beta^mu ^ beta^nu (a top form in 4D,
  // a 4-form in 5D whose wedge with some dx^i is the top form).
  std::vector<std::vector<Expr>> pair_coeffs;
  for (std::size_t i = 0; i < at.size(); ++i) {
    for (std::size_t j = i + 1; j < at.size(); ++j) {
      LambdaPolyForm w = wedge(at[i], at[j]);
      std::vector<Expr> c;
      for (const auto& [idx, p] : w.terms()) c.push_back(p.coeff(0));
      pair_coeffs.push_back(std::move(c));
    }
  }
  rep.pairs = pair_coeffs.size();
  std::vector<Expr> outs;
  std::vector<std::pair<std::size_t, std::size_t>> ranges;
  for (const auto& c : pair_coeffs) {
    ranges.push_back({outs.size(), c.size()});
    outs.insert(outs.end(), c.begin(), c.end());
  }
  std::set<std::string> vars;
  for (auto& e : outs) {
    e = bind_functions(e, bindings);
    auto fv = free_variables(e);
    vars.insert(fv.begin(), fv.end());
  }
  double mn = std::numeric_limits<double>::infinity();
  if (outs.empty()) {
    rep.min_abs = 0.0;
    return rep;
  }
  Program prog(outs, std::vector<std::string>(vars.begin(), vars.end()));
  for (const auto& p : sample) {
    auto v = prog.run(p);
    for (const auto& [start, count] : ranges) {
      double m = 0.0;
      for (std::size_t k = 0; k < count; ++k) m = std::max(m, std::fabs(v[start + k]));
      mn = std::min(mn, m);
    }
  }
  for (const auto& c : pair_coeffs)
    if (c.empty()) mn = 0.0;
  rep.min_abs = sample.empty() ? 0.0 : mn;
  return rep;
}

SymmetryCertificate check_symmetry(const GindikinCandidate& g, const LambdaVectorField& K, const Rational& c,
                                   const std::vector<Point>& sample, const Bindings& bindings, double tolerance) {
  if (K.lambda_degree() > 0) throw std::invalid_argument("symmetry field must not depend on lambda");
  LambdaPolyForm diffr = lie_derivative(K, g.form) - LambdaPoly(Expr(c)) * g.form;
  SymmetryCertificate cert{K, c, identity_report("symmetry", diffr, sample, bindings, tolerance)};
  return cert;
}

HypothesisFailure::HypothesisFailure(const std::string& what, ResidualReport report)
    : std::runtime_error(what), report_(std::move(report)) {}

LambdaPolyForm potential(const GindikinCandidate& g, const LambdaVectorField& K, const std::vector<Point>& sample,
                         const Bindings& bindings, double tolerance) {
  auto sym = check_symmetry(g, K, 1, sample, bindings, tolerance);
  if (!sym.certified()) throw HypothesisFailure("symmetry with c = 1 fails", sym.report);
  auto closed = check_closed(g, sample, bindings, tolerance);
  if (!closed.pass()) throw HypothesisFailure("form is not closed", closed);
  LambdaPolyForm alpha = interior(K, g.form);
  auto check = identity_report("potential", d_exterior(alpha) - g.form, sample, bindings, tolerance);
  if (!check.pass()) throw HypothesisFailure("d(alpha) differs from beta", check);
  return alpha;
}

GindikinCandidate twist(const LambdaPolyForm& alpha, const std::string& psi_coordinate, const TwistFunction& phi,
                        const Rational& lambda0) {
  alpha.chart().index_of(psi_coordinate);
  return twist(alpha, Expr::variable(psi_coordinate), phi, lambda0);
}

GindikinCandidate twist(const LambdaPolyForm& alpha, const Expr& psi, const TwistFunction& phi,
                        const Rational& lambda0) {
  if (alpha.degree() != 1) throw std::invalid_argument("twist expects a 1-form");
  const Chart& ch = alpha.chart();
  LambdaPolyForm a0 = eval_at_lambda(alpha, lambda0);
  LambdaPolyForm dpsi = LambdaPolyForm::differential(ch, psi);
  std::set<std::string> vars(ch.names().begin(), ch.names().end());
  ZeroTest zt = ZeroTest::generic(vars, function_symbols(alpha));
  const LambdaPolyForm da0 = d_exterior(a0);
  for (const auto& [idx, p] : da0.terms())
    if (!zt.is_zero(p.coeff(0)))
      throw NonDivisible("alpha at lambda0 is not closed (" + a0.index_label(idx) + ")", da0);
  const LambdaPolyForm cross = wedge(a0, dpsi);
  for (const auto& [idx, p] : cross.terms())
    if (!zt.is_zero(p.coeff(0)))
      throw NonDivisible("alpha at lambda0 is not proportional to d(" + psi.str() + ")", cross);
  Expr factor = phi.definition ? phi.definition->apply(psi) : Expr::function(phi.name, 0, psi);
  LambdaPolyForm twisted = LambdaPoly(factor) * alpha;
  return GindikinCandidate(divide_linear(d_exterior(twisted), lambda0, nullptr));
}

}  // namespace heavenly
