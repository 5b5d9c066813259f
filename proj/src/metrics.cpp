#include "heavenly/metrics.hpp"

#include <cmath>

namespace heavenly {

MetricExpr::MetricExpr(Chart chart, Variance variance)
    : chart_(std::move(chart)), variance_(variance), entries_(chart_.dim() * chart_.dim()) {}

const Expr& MetricExpr::operator()(std::size_t i, std::size_t j) const {
  if (inverse_of_) throw std::logic_error("implicit inverse metric has no symbolic entries");
  return entries_.at(i * dim() + j);
}

void MetricExpr::set(std::size_t i, std::size_t j, const Expr& e) {
  entries_.at(i * dim() + j) = e;
  entries_.at(j * dim() + i) = e;
}

void MetricExpr::add(std::size_t i, std::size_t j, const Expr& e) { set(i, j, (*this)(i, j) + e); }

void MetricExpr::add_symmetric_product(const LambdaPolyForm& a, const LambdaPolyForm& b, const Expr& c) {
  if (a.degree() != 1 || b.degree() != 1) throw std::invalid_argument("symmetric product needs 1-forms");
  if (a.chart() != chart_ || b.chart() != chart_) throw ChartMismatch("1-form chart differs from metric chart");
  if (a.lambda_degree() > 0 || b.lambda_degree() > 0) throw std::invalid_argument("1-forms must not depend on lambda");
  for (const auto& [ia, ca] : a.terms()) {
    for (const auto& [ib, cb] : b.terms()) {
      auto i = static_cast<std::size_t>(ia[0]), j = static_cast<std::size_t>(ib[0]);
      Expr t = c * ca.coeff(0) * cb.coeff(0);
      if (i == j) {
        add(i, i, Expr(2) * t);
      } else {
        entries_[i * dim() + j] = entries_[i * dim() + j] + t;
        entries_[j * dim() + i] = entries_[j * dim() + i] + t;
      }
    }
  }
}

MetricExpr MetricExpr::map(const std::function<Expr(const Expr&)>& f) const {
  if (inverse_of_) throw std::logic_error("cannot map an implicit inverse metric");
  MetricExpr out(chart_, variance_);
  for (std::size_t i = 0; i < dim(); ++i)
    for (std::size_t j = i; j < dim(); ++j) out.set(i, j, f((*this)(i, j)));
  return out;
}

MetricExpr MetricExpr::scaled(const Expr& c) const {
  return map([&](const Expr& e) { return c * e; });
}

MetricExpr MetricExpr::implicit_inverse(const MetricExpr& source) {
  MetricExpr out(source.chart_,
                 source.variance_ == Variance::Covariant ? Variance::Contravariant : Variance::Covariant);
  out.entries_.clear();
  out.inverse_of_ = std::make_shared<const MetricExpr>(source);
  return out;
}

Eigen::MatrixXd MetricExpr::at(const Point& p, const Bindings& bindings) const {
  if (inverse_of_) return inverse_of_->at(p, bindings).inverse();
  std::vector<Expr> outs;
  std::set<std::string> vars;
  for (std::size_t i = 0; i < dim(); ++i)
    for (std::size_t j = i; j < dim(); ++j) {
      Expr e = bind_functions((*this)(i, j), bindings);
      auto fv = free_variables(e);
      vars.insert(fv.begin(), fv.end());
      outs.push_back(e);
    }
  Program prog(outs, std::vector<std::string>(vars.begin(), vars.end()));
  auto v = prog.run(p);
  Eigen::MatrixXd m(dim(), dim());
  std::size_t k = 0;
  for (std::size_t i = 0; i < dim(); ++i)
    for (std::size_t j = i; j < dim(); ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v[k];
      m(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = v[k];
      ++k;
    }
  return m;
}

std::size_t MetricExpr::node_budget_size() const {
  std::size_t n = 0;
  for (const auto& e : entries_) n += node_count(e);
  return n;
}

Json to_json(const MetricExpr& g) {
  Json j;
  j["chart"] = g.chart().names();
  j["variance"] = g.variance() == Variance::Covariant ? "covariant" : "contravariant";
  if (!g.is_symbolic()) {
    j["implicit_inverse_of"] = to_json(g.inverse_source());
    return j;
  }
  Json entries = Json::array();
  for (std::size_t a = 0; a < g.dim(); ++a)
    for (std::size_t b = a; b < g.dim(); ++b) {
      Json e;
      e["index"] = {g.chart().name(a), g.chart().name(b)};
      e["expr"] = g(a, b).str();
      entries.push_back(e);
    }
  j["entries"] = entries;
  return j;
}

// ---- builders ---------------------------------------------------------------

namespace {

Expr d2(const Expr& f, const std::string& a, const std::string& b) { return diff(f, std::vector<std::string>{a, b}); }

std::pair<Expr, Expr> phi_pair(const TwistFunction& phi) {
  Expr z = Expr::variable("z");
  if (phi.definition) return {phi.definition->apply(z, 0), phi.definition->apply(z, 1)};
  return {Expr::function(phi.name, 0, z), Expr::function(phi.name, 1, z)};
}

}  // namespace

Expr general_heavenly_jacobian(const Expr& f) {
  return d2(f, "x1", "x4") * d2(f, "x2", "x3") - d2(f, "x1", "x3") * d2(f, "x2", "x4");
}

MetricExpr general_heavenly_metric(const Expr& f) {
  MetricExpr g(chart_general(4), Variance::Covariant);
  auto F = [&](int i, int j) { return d2(f, "x" + std::to_string(i), "x" + std::to_string(j)); };
  Expr invJ = pow(general_heavenly_jacobian(f), -1);
  Expr m[4][4];
  m[0][0] = Expr(2) * F(1, 2) * F(1, 3) * F(1, 4);
  m[0][1] = F(1, 2) * (F(1, 4) * F(2, 3) + F(1, 3) * F(2, 4));
  m[0][2] = F(1, 3) * (F(1, 4) * F(2, 3) + F(1, 2) * F(3, 4));
  m[0][3] = F(1, 4) * (F(1, 3) * F(2, 4) + F(1, 2) * F(3, 4));
  m[1][1] = Expr(2) * F(1, 2) * F(2, 3) * F(2, 4);
  m[1][2] = F(2, 3) * (F(1, 3) * F(2, 4) + F(1, 2) * F(3, 4));
  m[1][3] = F(2, 4) * (F(1, 4) * F(2, 3) + F(1, 2) * F(3, 4));
  m[2][2] = Expr(2) * F(1, 3) * F(2, 3) * F(3, 4);
  m[2][3] = F(3, 4) * (F(1, 4) * F(2, 3) + F(1, 3) * F(2, 4));
  m[3][3] = Expr(2) * F(1, 4) * F(2, 4) * F(3, 4);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i; j < 4; ++j) g.set(i, j, invJ * m[i][j]);
  return g;
}

MetricExpr plebanski_I_metric(const Expr& t) {
  MetricExpr g(chart_I4(), Variance::Covariant);
  Expr half(Rational(1, 2));
  // r=0 s=1 z=2 w=3
  g.set(0, 2, -half * d2(t, "r", "z"));
  g.set(0, 3, -half * d2(t, "r", "w"));
  g.set(1, 2, -half * d2(t, "s", "z"));
  g.set(1, 3, -half * d2(t, "s", "w"));
  return g;
}

MetricExpr plebanski_II_metric(const Expr& t) {
  MetricExpr g(chart_II4(), Variance::Covariant);
  Expr half(Rational(1, 2));
  // x=0 y=1 z=2 w=3
  g.set(0, 3, half);
  g.set(1, 2, half);
  g.set(2, 2, -d2(t, "x", "x"));
  g.set(3, 3, -d2(t, "y", "y"));
  g.set(2, 3, d2(t, "x", "y"));
  return g;
}

Expr twisted_conformal_factor_I(const Expr& t, const TwistFunction& phi) {
  auto [p, dp] = phi_pair(phi);
  return p * (dp * d2(t, "w", "w") + p);
}

Expr twisted_conformal_factor_II(const Expr& t, const TwistFunction& phi) {
  auto [p, dp] = phi_pair(phi);
  return dp * d2(t, "y", "y") + p;
}

MetricExpr twisted_inverse_I(const Expr& t, const TwistFunction& phi) {
  auto [p, dp] = phi_pair(phi);
  Expr s = Expr::variable("s");
  Expr c = pow(twisted_conformal_factor_I(t, phi), -1);
  auto T = [&](const char* a, const char* b) { return d2(t, a, b); };
  Expr tr = diff(t, "r");
  MetricExpr h(chart_I4(), Variance::Contravariant);
  h.set(0, 1, -dp * s * T("s", "w"));
  h.set(0, 2, p * T("s", "w"));
  h.set(0, 3, s * dp * T("s", "s") - p * T("s", "z"));
  h.set(1, 1, Expr(2) * dp * s * T("r", "w"));
  h.set(1, 2, -p * T("r", "w"));
  h.set(1, 3, p * T("r", "z") + dp * (tr - s * T("r", "s")));
  h.set(3, 3, Expr(2) * dp);
  return h.scaled(c);
}

MetricExpr twisted_inverse_II(const Expr& t, const TwistFunction& phi) {
  auto [p, dp] = phi_pair(phi);
  Expr y = Expr::variable("y"), w = Expr::variable("w");
  Expr r = dp / p;
  Expr c = pow(twisted_conformal_factor_II(t, phi), -1);
  auto T = [&](const char* a, const char* b) { return d2(t, a, b); };
  MetricExpr h(chart_II4(), Variance::Contravariant);
  h.set(0, 0, Expr(-2) * T("y", "y"));
  h.set(0, 1, Expr(2) * T("x", "y") - r * T("w", "y"));
  h.set(0, 3, r * T("y", "y") - Expr(1));
  h.set(1, 1, Expr(2) * (-T("x", "x") + r * (T("w", "x") + y)));
  h.set(1, 2, Expr(-1));
  h.set(1, 3, -r * (T("x", "y") - w));
  h.set(3, 3, Expr(2) * r);
  return h.scaled(c);
}

Eigen::MatrixXd form_matrix(const LambdaPolyForm& b, const Point& p, const Bindings& bindings) {
  if (b.degree() != 2) throw std::invalid_argument("form_matrix needs a 2-form");
  auto n = static_cast<Eigen::Index>(b.chart().dim());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (const auto& [idx, c] : b.terms()) {
    double v = eval(c.coeff(0), p, bindings);
    m(idx[0], idx[1]) = v;
    m(idx[1], idx[0]) = -v;
  }
  return m;
}

namespace {

using ExprMatrix = std::vector<std::vector<Expr>>;

ExprMatrix homogenized_matrix(const LambdaPolyForm& beta, int degree, const Rational& m0, const Rational& m1) {
  std::size_t n = beta.chart().dim();
  ExprMatrix m(n, std::vector<Expr>(n));
  for (const auto& [idx, c] : beta.terms()) {
    Expr v = c.homogenized(degree, m0, m1);
    auto i = static_cast<std::size_t>(idx[0]), j = static_cast<std::size_t>(idx[1]);
    m[i][j] = v;
    m[j][i] = -v;
  }
  return m;
}

ExprMatrix combine(const ExprMatrix& a, const ExprMatrix& b, int sign) {
  ExprMatrix m = a;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) m[i][j] = sign > 0 ? a[i][j] + b[i][j] : a[i][j] - b[i][j];
  return m;
}

ExprMatrix multiply(const ExprMatrix& a, const ExprMatrix& b) {
  std::size_t n = a.size();
  ExprMatrix m(n, std::vector<Expr>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<Expr> t;
      for (std::size_t k = 0; k < n; ++k)
        if (!a[i][k].is_zero() && !b[k][j].is_zero()) t.push_back(a[i][k] * b[k][j]);
      m[i][j] = make_sum(std::move(t));
    }
  return m;
}

// Inverse of a 4x4 skew matrix through its Pfaffian.
ExprMatrix skew_inverse(const ExprMatrix& a) {
  Expr pf = a[0][1] * a[2][3] - a[0][2] * a[1][3] + a[0][3] * a[1][2];
  Expr ip = pow(pf, -1);
  ExprMatrix m(4, std::vector<Expr>(4));
  auto put = [&](int i, int j, const Expr& v) {
    m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = ip * v;
    m[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = -(ip * v);
  };
  put(0, 1, -a[2][3]);
  put(0, 2, a[1][3]);
  put(0, 3, -a[1][2]);
  put(1, 2, -a[0][3]);
  put(1, 3, a[0][2]);
  put(2, 3, -a[0][1]);
  return m;
}

}  // namespace

MetricExpr gindikin_reconstruct(const GindikinCandidate& beta, const Homogeneous& mu, const Homogeneous& nu) {
  if (beta.form.chart().dim() != 4) throw std::invalid_argument("reconstruction needs a 4D structure");
  Rational det = mu.first * nu.second - mu.second * nu.first;
  if (det == 0) throw std::invalid_argument("proportional homogeneous parameters");
  int D = std::max(beta.form.lambda_degree(), 2);
  ExprMatrix Bm = homogenized_matrix(beta.form, D, mu.first, mu.second);
  ExprMatrix Bn = homogenized_matrix(beta.form, D, nu.first, nu.second);
  ExprMatrix Bs = homogenized_matrix(beta.form, D, mu.first + nu.first, mu.second + nu.second);
  ExprMatrix L = combine(combine(Bs, Bm, -1), Bn, -1);
  ExprMatrix Sinv = skew_inverse(combine(Bm, Bn, 1));
  ExprMatrix R = combine(Bm, Bn, -1);
  ExprMatrix G = multiply(multiply(L, Sinv), R);
  Expr scale(Rational(-1) / det);
  MetricExpr g(beta.form.chart(), Variance::Covariant);
  Expr half(Rational(1, 2));
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i; j < 4; ++j)
      g.set(i, j, i == j ? scale * G[i][i] : scale * half * (G[i][j] + G[j][i]));
  return g;
}

MetricExpr frame_metric(const LambdaPolyForm& g0, const LambdaPolyForm& g1, const LambdaPolyForm& d0,
                        const LambdaPolyForm& d1) {
  MetricExpr g(g0.chart(), Variance::Covariant);
  g.add_symmetric_product(g0, d1);
  g.add_symmetric_product(g1, d0, Expr(-1));
  return g;
}

namespace {

Expr det_rec(const MetricExpr& g, std::vector<std::size_t> rows, std::vector<std::size_t> cols) {
  if (rows.size() == 1) return g(rows[0], cols[0]);
  std::vector<Expr> terms;
  for (std::size_t k = 0; k < cols.size(); ++k) {
    const Expr& a = g(rows[0], cols[k]);
    if (a.is_zero()) continue;
    std::vector<std::size_t> r(rows.begin() + 1, rows.end()), c;
    for (std::size_t m = 0; m < cols.size(); ++m)
      if (m != k) c.push_back(cols[m]);
    Expr minor = det_rec(g, r, c);
    terms.push_back((k % 2 == 0 ? a : -a) * minor);
  }
  return make_sum(std::move(terms));
}

std::vector<std::size_t> all_but(std::size_t n, std::size_t skip) {
  std::vector<std::size_t> v;
  for (std::size_t i = 0; i < n; ++i)
    if (i != skip) v.push_back(i);
  return v;
}

}  // namespace

Expr determinant(const MetricExpr& g) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < g.dim(); ++i) idx.push_back(i);
  return det_rec(g, idx, idx);
}

MetricExpr invert_metric(const MetricExpr& g, std::size_t node_budget) {
  if (!g.is_symbolic()) return g.inverse_source();
  std::size_t n = g.dim();
  Expr det = determinant(g);
  if (det.is_zero()) throw SingularMetric("metric determinant vanishes identically");
  if (node_count(det) > node_budget) return MetricExpr::implicit_inverse(g);
  Expr idet = pow(det, -1);
  MetricExpr inv(g.chart(), g.variance() == Variance::Covariant ? Variance::Contravariant : Variance::Covariant);
  std::size_t total = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      Expr cof = det_rec(g, all_but(n, j), all_but(n, i));
      if ((i + j) % 2) cof = -cof;
      Expr e = idet * cof;
      total += node_count(e);
      if (total > node_budget) return MetricExpr::implicit_inverse(g);
      inv.set(i, j, e);
    }
  return inv;
}

double null_plane_defect(const MetricExpr& g, const GindikinCandidate& beta, const Point& p,
                         const Bindings& bindings) {
  Eigen::MatrixXd G = g.at(p, bindings);
  if (g.variance() == Variance::Contravariant) G = G.inverse().eval();
  double gn = G.norm();
  double worst = 0.0;
  for (const auto& l : beta.panel) {
    Eigen::MatrixXd B = form_matrix(eval_at_lambda(beta.form, l), p, bindings);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(B, Eigen::ComputeFullV);
    auto n = B.cols();
    Eigen::MatrixXd K = svd.matrixV().rightCols(n - 2);
    Eigen::MatrixXd q = K.transpose() * G * K;
    worst = std::max(worst, q.cwiseAbs().maxCoeff() / gn);
  }
  return worst;
}

}  // namespace heavenly
