#include "heavenly/curvature.hpp"

#include <cmath>

namespace heavenly {

namespace {

using Eigen::Index;

Index ix(std::size_t i) { return static_cast<Index>(i); }

constexpr std::array<std::pair<std::size_t, std::size_t>, 6> kPairs{
    {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// Christoffel symbols and Riemann tensor from the covariant metric jet.
CurvatureAt assemble(const Eigen::MatrixXd& g, const std::vector<Eigen::MatrixXd>& dg,
                     const std::vector<Eigen::MatrixXd>& ddg) {
  CurvatureAt c;
  const std::size_t n = static_cast<std::size_t>(g.rows());
  c.n = n;
  c.g = g;
  c.ginv = g.inverse();
  const auto& gi = c.ginv;
  auto L = [&](std::size_t d, std::size_t b, std::size_t cc) {  // Gamma_{d,bc}
    return 0.5 * (dg[b](ix(d), ix(cc)) + dg[cc](ix(d), ix(b)) - dg[d](ix(b), ix(cc)));
  };
  auto dL = [&](std::size_t e, std::size_t d, std::size_t b, std::size_t cc) {
    return 0.5 * (ddg[e * n + b](ix(d), ix(cc)) + ddg[e * n + cc](ix(d), ix(b)) - ddg[e * n + d](ix(b), ix(cc)));
  };
  std::vector<double> low(n * n * n);
  for (std::size_t d = 0; d < n; ++d)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t cc = 0; cc < n; ++cc) low[(d * n + b) * n + cc] = L(d, b, cc);
  c.gamma.assign(n * n * n, 0.0);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t cc = 0; cc < n; ++cc) {
        double s = 0.0;
        for (std::size_t d = 0; d < n; ++d) s += gi(ix(a), ix(d)) * low[(d * n + b) * n + cc];
        c.gamma[(a * n + b) * n + cc] = s;
      }
  // dGamma[e][a][b][c]
  std::vector<double> dgam(n * n * n * n, 0.0);
  for (std::size_t e = 0; e < n; ++e) {
    Eigen::MatrixXd dgi = -gi * dg[e] * gi;
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        for (std::size_t cc = 0; cc < n; ++cc) {
          double s = 0.0;
          for (std::size_t d = 0; d < n; ++d)
            s += dgi(ix(a), ix(d)) * low[(d * n + b) * n + cc] + gi(ix(a), ix(d)) * dL(e, d, b, cc);
          dgam[((e * n + a) * n + b) * n + cc] = s;
        }
  }
  auto G = [&](std::size_t a, std::size_t b, std::size_t cc) { return c.gamma[(a * n + b) * n + cc]; };
  auto dG = [&](std::size_t e, std::size_t a, std::size_t b, std::size_t cc) {
    return dgam[((e * n + a) * n + b) * n + cc];
  };
  c.riemann.assign(n * n * n * n, 0.0);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t cc = 0; cc < n; ++cc)
        for (std::size_t d = 0; d < n; ++d) {
          double s = dG(cc, a, d, b) - dG(d, a, cc, b);
          for (std::size_t e = 0; e < n; ++e) s += G(a, cc, e) * G(e, d, b) - G(a, d, e) * G(e, cc, b);
          c.riemann[((a * n + b) * n + cc) * n + d] = s;
        }
  c.ricci = Eigen::MatrixXd::Zero(ix(n), ix(n));
  for (std::size_t b = 0; b < n; ++b)
    for (std::size_t d = 0; d < n; ++d) {
      double s = 0.0;
      for (std::size_t a = 0; a < n; ++a) s += c.R(a, b, a, d);
      c.ricci(ix(b), ix(d)) = s;
    }
  c.scalar = (gi.cwiseProduct(c.ricci)).sum();
  return c;
}

}  // namespace

double CurvatureAt::riemann_norm() const { return max_abs(riemann); }

double CurvatureAt::ricci_norm() const { return ricci.size() ? ricci.cwiseAbs().maxCoeff() : 0.0; }

double CurvatureAt::symmetry_defect() const {
  std::vector<double> low(n * n * n * n, 0.0);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        for (std::size_t d = 0; d < n; ++d) {
          double s = 0.0;
          for (std::size_t e = 0; e < n; ++e) s += g(ix(a), ix(e)) * R(e, b, c, d);
          low[((a * n + b) * n + c) * n + d] = s;
        }
  auto Rl = [&](std::size_t a, std::size_t b, std::size_t c, std::size_t d) {
    return low[((a * n + b) * n + c) * n + d];
  };
  double worst = 0.0;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        for (std::size_t d = 0; d < n; ++d) {
          worst = std::max({worst, std::abs(Rl(a, b, c, d) + Rl(b, a, c, d)),
                            std::abs(Rl(a, b, c, d) + Rl(a, b, d, c)), std::abs(Rl(a, b, c, d) - Rl(c, d, a, b)),
                            std::abs(Rl(a, b, c, d) + Rl(a, c, d, b) + Rl(a, d, b, c))});
        }
  return worst / (1.0 + max_abs(low));
}

// ---- engine -----------------------------------------------------------------

CurvatureEngine::CurvatureEngine(const MetricExpr& g, const Bindings& bindings) : chart_(g.chart()) {
  implicit_ = !g.is_symbolic();
  const MetricExpr& m = implicit_ ? g.inverse_source() : g;
  contravariant_ = m.variance() == Variance::Contravariant;
  const std::size_t n = m.dim();
  std::vector<Expr> outs;
  std::vector<Expr> entries;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) entries.push_back(bind_functions(m(i, j), bindings));
  const auto& names = chart_.names();
  std::vector<Expr> first;
  for (const auto& e : entries) outs.push_back(e);
  for (std::size_t c = 0; c < n; ++c)
    for (const auto& e : entries) {
      Expr d = diff(e, names[c]);
      outs.push_back(d);
      first.push_back(d);
    }
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t d = c; d < n; ++d)
      for (std::size_t k = 0; k < entries.size(); ++k) outs.push_back(diff(first[c * entries.size() + k], names[d]));
  program_ = Program(outs, names);
}

void CurvatureEngine::metric_jet(const Point& p, Eigen::MatrixXd& g, std::vector<Eigen::MatrixXd>& dg,
                                 std::vector<Eigen::MatrixXd>& ddg) const {
  const std::size_t n = chart_.dim();
  const std::size_t ne = n * (n + 1) / 2;
  std::vector<double> in;
  for (const auto& name : chart_.names()) {
    auto it = p.find(name);
    if (it == p.end()) throw UnboundSymbol(name);
    in.push_back(it->second);
  }
  auto v = program_.run(in);
  auto unpack = [&](std::size_t offset) {
    Eigen::MatrixXd m(ix(n), ix(n));
    std::size_t k = offset;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) {
        m(ix(i), ix(j)) = v[k];
        m(ix(j), ix(i)) = v[k];
        ++k;
      }
    return m;
  };
  Eigen::MatrixXd M = unpack(0);
  std::vector<Eigen::MatrixXd> dM(n), ddM(n * n);
  for (std::size_t c = 0; c < n; ++c) dM[c] = unpack(ne * (1 + c));
  std::size_t off = ne * (1 + n);
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t d = c; d < n; ++d) {
      ddM[c * n + d] = unpack(off);
      ddM[d * n + c] = ddM[c * n + d];
      off += ne;
    }
  if (!contravariant_) {
    g = M;
    dg = dM;
    ddg = ddM;
    return;
  }
  g = M.inverse();
  dg.assign(n, Eigen::MatrixXd());
  for (std::size_t c = 0; c < n; ++c) dg[c] = -g * dM[c] * g;
  ddg.assign(n * n, Eigen::MatrixXd());
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t d = 0; d < n; ++d)
      ddg[c * n + d] = -dg[d] * dM[c] * g - g * ddM[c * n + d] * g - g * dM[c] * dg[d];
}

CurvatureAt CurvatureEngine::at(const Point& p) const {
  Eigen::MatrixXd g;
  std::vector<Eigen::MatrixXd> dg, ddg;
  metric_jet(p, g, dg, ddg);
  if (std::abs(g.determinant()) < 1e-300) throw SingularMetric("metric singular at sample point");
  return assemble(g, dg, ddg);
}

std::vector<Expr> christoffel(const MetricExpr& g) {
  if (g.variance() != Variance::Covariant) throw std::invalid_argument("christoffel needs a covariant metric");
  MetricExpr gi = invert_metric(g);
  if (!gi.is_symbolic()) throw std::runtime_error("inverse metric exceeds the node budget");
  const std::size_t n = g.dim();
  const auto& names = g.chart().names();
  std::vector<Expr> out(n * n * n);
  Expr half(Rational(1, 2));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = b; c < n; ++c) {
        std::vector<Expr> terms;
        for (std::size_t d = 0; d < n; ++d) {
          if (gi(a, d).is_zero()) continue;
          Expr low = diff(g(d, c), names[b]) + diff(g(d, b), names[c]) - diff(g(b, c), names[d]);
          if (!low.is_zero()) terms.push_back(gi(a, d) * low);
        }
        Expr v = half * make_sum(std::move(terms));
        out[(a * n + b) * n + c] = v;
        out[(a * n + c) * n + b] = v;
      }
  return out;
}

CurvatureAt fd_curvature(const MetricExpr& g, const Point& p, const Bindings& bindings, double h) {
  const std::size_t n = g.dim();
  const auto& names = g.chart().names();
  auto cov = [&](const Point& q) {
    Eigen::MatrixXd m = g.at(q, bindings);
    return g.variance() == Variance::Contravariant ? Eigen::MatrixXd(m.inverse()) : m;
  };
  auto shifted = [&](const Point& q, std::size_t c, double t) {
    Point r = q;
    r[names[c]] += t;
    return r;
  };
  auto gamma_at = [&](const Point& q) {
    std::vector<Eigen::MatrixXd> dg(n);
    for (std::size_t c = 0; c < n; ++c) dg[c] = (cov(shifted(q, c, h)) - cov(shifted(q, c, -h))) / (2 * h);
    Eigen::MatrixXd gi = cov(q).inverse();
    std::vector<double> gam(n * n * n, 0.0);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        for (std::size_t c = 0; c < n; ++c) {
          double s = 0.0;
          for (std::size_t d = 0; d < n; ++d)
            s += gi(ix(a), ix(d)) * 0.5 * (dg[b](ix(d), ix(c)) + dg[c](ix(d), ix(b)) - dg[d](ix(b), ix(c)));
          gam[(a * n + b) * n + c] = s;
        }
    return gam;
  };
  CurvatureAt out;
  out.n = n;
  out.g = cov(p);
  out.ginv = out.g.inverse();
  out.gamma = gamma_at(p);
  std::vector<std::vector<double>> dgam(n);
  for (std::size_t e = 0; e < n; ++e) {
    auto plus = gamma_at(shifted(p, e, h));
    auto minus = gamma_at(shifted(p, e, -h));
    dgam[e].resize(plus.size());
    for (std::size_t k = 0; k < plus.size(); ++k) dgam[e][k] = (plus[k] - minus[k]) / (2 * h);
  }
  auto G = [&](std::size_t a, std::size_t b, std::size_t c) { return out.gamma[(a * n + b) * n + c]; };
  out.riemann.assign(n * n * n * n, 0.0);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        for (std::size_t d = 0; d < n; ++d) {
          double s = dgam[c][(a * n + d) * n + b] - dgam[d][(a * n + c) * n + b];
          for (std::size_t e = 0; e < n; ++e) s += G(a, c, e) * G(e, d, b) - G(a, d, e) * G(e, c, b);
          out.riemann[((a * n + b) * n + c) * n + d] = s;
        }
  out.ricci = Eigen::MatrixXd::Zero(ix(n), ix(n));
  for (std::size_t b = 0; b < n; ++b)
    for (std::size_t d = 0; d < n; ++d)
      for (std::size_t a = 0; a < n; ++a) out.ricci(ix(b), ix(d)) += out.R(a, b, a, d);
  out.scalar = out.ginv.cwiseProduct(out.ricci).sum();
  return out;
}

// ---- Weyl -------------------------------------------------------------------

Eigen::Matrix<double, 6, 6> bivector_operator(const CurvatureAt& c) {
  if (c.n != 4) throw std::invalid_argument("bivector operator needs a 4D metric");
  Eigen::Matrix<double, 6, 6> W;
  for (std::size_t r = 0; r < 6; ++r) {
    auto [a, b] = kPairs[r];
    for (std::size_t k = 0; k < 6; ++k) {
      auto [cc, d] = kPairs[k];
      double s = 0.0;
      for (std::size_t e = 0; e < 4; ++e) s += c.ginv(ix(b), ix(e)) * c.R(a, e, cc, d);
      W(ix(r), ix(k)) = s;
    }
  }
  return W;
}

namespace {

Eigen::Matrix4d coefficient_matrix(const LambdaPolyForm& beta, int k, const Point& p, const Bindings& bindings) {
  Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
  for (const auto& [idx, c] : beta.terms()) {
    Expr e = c.coeff(k);
    if (e.is_zero()) continue;
    double v = eval(e, p, bindings);
    m(idx[0], idx[1]) = v;
    m(idx[1], idx[0]) = -v;
  }
  return m;
}

}  // namespace

WeylData selfdual_weyl(const CurvatureAt& c, const GindikinCandidate* beta, const Point& p, const Bindings& bindings,
                       double kappa_I, double kappa_J) {
  WeylData out;
  out.kappa_I = kappa_I;
  out.kappa_J = kappa_J;
  out.ricci = c.ricci_norm();
  Eigen::Matrix<double, 6, 6> M = bivector_operator(c);
  double mnorm = M.norm();
  if (beta) {
    if (beta->form.chart().dim() != 4) throw std::invalid_argument("self-dual basis needs a 4D structure");
    Eigen::Matrix<double, 3, 6> rows;
    Eigen::Matrix<double, 6, 3> raised;
    for (int k = 0; k < 3; ++k) {
      Eigen::Matrix4d B = coefficient_matrix(beta->form, k, p, bindings);
      Eigen::Matrix4d up = c.ginv * B * c.ginv;
      for (std::size_t r = 0; r < 6; ++r) {
        rows(k, ix(r)) = B(ix(kPairs[r].first), ix(kPairs[r].second));
        raised(ix(r), k) = up(ix(kPairs[r].first), ix(kPairs[r].second));
      }
      out.basis.push_back("beta" + std::to_string(k));
    }
    Eigen::JacobiSVD<Eigen::Matrix<double, 3, 6>> svd(rows, Eigen::ComputeFullV);
    if (svd.singularValues()(2) < 1e-12 * std::max(1.0, svd.singularValues()(0)))
      throw SingularMetric("degenerate self-dual basis");
    Eigen::Matrix<double, 6, 3> K = svd.matrixV().rightCols<3>();
    out.W = K.transpose() * M * K;
    double scale = mnorm > 0 ? mnorm : 1.0;
    out.invariance_residual = (M * K - K * out.W).norm() / scale;
    out.flat_half_residual = (M * raised).norm() / (scale * raised.norm());
    Eigen::Matrix3d W2 = out.W * out.W;
    out.trace = out.W.trace();
    out.I = kappa_I * W2.trace();
    out.J = kappa_J * (W2 * out.W).trace();
  } else {
    Eigen::Matrix<double, 6, 6> M2 = M * M;
    out.trace = M.trace();
    out.I = kappa_I * M2.trace();
    out.J = kappa_J * (M2 * M).trace();
  }
  out.S = out.I * out.I * out.I - 6.0 * out.J * out.J;
  return out;
}

std::array<Expr, 5> plebanski_II_spinor(const Expr& t) {
  auto D = [&](std::initializer_list<const char*> v) {
    std::vector<std::string> vars(v.begin(), v.end());
    return diff(t, vars);
  };
  return {D({"y", "y", "y", "y"}), -D({"y", "y", "y", "x"}), D({"y", "y", "x", "x"}), -D({"y", "x", "x", "x"}),
          D({"x", "x", "x", "x"})};
}

WeylData plebanski_II_weyl(const Expr& theta, const Point& p, const Bindings& bindings) {
  auto C = plebanski_II_spinor(theta);
  std::array<double, 5> c{};
  for (std::size_t k = 0; k < 5; ++k) c[k] = eval(C[k], p, bindings);
  WeylData out;
  out.spinor = c;
  out.basis = {"spinor"};
  out.I = 8.0 * (c[0] * c[4] - 4.0 * c[1] * c[3] + 3.0 * c[2] * c[2]);
  out.J = 48.0 * (c[0] * c[2] * c[4] + 2.0 * c[1] * c[2] * c[3] - c[2] * c[2] * c[2] - c[0] * c[3] * c[3] -
                  c[1] * c[1] * c[4]);
  out.S = out.I * out.I * out.I - 6.0 * out.J * out.J;
  return out;
}

InvariantsReport invariants_report(const WeylData& w, double tolerance) {
  InvariantsReport r;
  r.I = w.I;
  r.J = w.J;
  r.S = w.I * w.I * w.I - 6.0 * w.J * w.J;
  r.tolerance = tolerance;
  r.special = std::abs(r.S) <= tolerance * (1.0 + std::pow(std::abs(r.I), 3) + r.J * r.J);
  return r;
}

Json to_json(const WeylData& w) {
  Json j;
  j["basis"] = w.basis;
  Json W = Json::array();
  for (int r = 0; r < 3; ++r) {
    Json row = Json::array();
    for (int c = 0; c < 3; ++c) row.push_back(w.W(r, c));
    W.push_back(row);
  }
  j["W"] = W;
  if (w.spinor) j["spinor"] = *w.spinor;
  j["I"] = w.I;
  j["J"] = w.J;
  j["S"] = w.S;
  j["verdict"] = invariants_report(w).special ? "special" : "general";
  j["kappa_I"] = w.kappa_I;
  j["kappa_J"] = w.kappa_J;
  j["trace"] = w.trace;
  j["invariance_residual"] = w.invariance_residual;
  j["flat_half_residual"] = w.flat_half_residual;
  j["ricci"] = w.ricci;
  return j;
}

Json to_json(const InvariantsReport& r) {
  Json j;
  j["I"] = r.I;
  j["J"] = r.J;
  j["S"] = r.S;
  j["special"] = r.special;
  j["tolerance"] = r.tolerance;
  return j;
}

}  // namespace heavenly
