#include "heavenly/holo.hpp"

#include <cmath>

namespace heavenly {

ComplexExpr imaginary_unit() { return {Expr(0), Expr(1)}; }

const Chart& chart_holo() {
  static const Chart c({"x", "Z", "kappa", "mu"});
  return c;
}

namespace {

Expr V(const char* n) { return Expr::variable(n); }
Expr Q(long p, long q = 1) { return Expr(Rational(p, q)); }

}  // namespace

MetricExpr holo_metric(const Expr& psi) {
  Expr Z = V("Z"), k = V("kappa"), m = V("mu");
  Expr s = Q(2) * k + Q(3) * psi;  // 2 kappa + 3 Psi
  Expr d = Q(2) * k - Q(3) * psi;
  Expr pre = Q(2) * pow(s, -1);
  MetricExpr g(chart_holo(), Variance::Covariant);
  // x=0 Z=1 kappa=2 mu=3; off-diagonal display coefficients are halved
  g.set(0, 0, pre * (Q(-2) * k * Z * psi));
  g.set(0, 1, pre * (-k * m));
  g.set(0, 3, pre * (Q(-1, 2) * Z * d));
  g.set(1, 1, pre * (-k * (Q(4) * m * m + s * s) * pow(Q(8) * Z * psi, -1)));
  g.set(1, 2, pre * (-(s * s) * pow(Q(8) * psi, -1)));
  g.set(1, 3, pre * (-m * d * pow(Q(4) * psi, -1)));
  g.set(3, 3, pre * (Q(3) * Z));
  return g;
}

TetradMetric holo_tetrad_metric(const Expr& psi, const Rational& fval) {
  const Chart& ch = chart_holo();
  Expr Z = V("Z"), k = V("kappa"), m = V("mu");
  ComplexExpr i = imaginary_unit();
  ComplexExpr xi{k, m}, xb = xi.conj(), f{Expr(fval)}, fb = f.conj(), P{psi};
  // 1-forms as complex coefficient vectors on (dx, dZ, dkappa, dmu)
  using CForm = std::array<ComplexExpr, 4>;
  CForm dxi{ComplexExpr(), ComplexExpr(), ComplexExpr(Expr(1)), i};
  CForm dxb{ComplexExpr(), ComplexExpr(), ComplexExpr(Expr(1)), ComplexExpr(Expr(0), Expr(-1))};
  auto scale = [](const ComplexExpr& c, const CForm& a) {
    CForm o;
    for (std::size_t j = 0; j < 4; ++j) o[j] = c * a[j];
    return o;
  };
  auto add = [](const CForm& a, const CForm& b) {
    CForm o;
    for (std::size_t j = 0; j < 4; ++j) o[j] = a[j] + b[j];
    return o;
  };
  auto real_div = [](const CForm& a, const Expr& den) {
    CForm o;
    Expr inv = pow(den, -1);
    for (std::size_t j = 0; j < 4; ++j) o[j] = ComplexExpr(a[j].re * inv, a[j].im * inv);
    return o;
  };
  auto basis = [](std::size_t j, const ComplexExpr& c) {
    CForm o;
    o[j] = c;
    return o;
  };
  Expr invZ = pow(Z, -1);
  ComplexExpr sum = xi + xb;  // real
  ComplexExpr fs = f + fb;

  CForm t1 = scale(ComplexExpr(Q(-1, 4)),
                   add(basis(1, xi * xb * ComplexExpr(invZ)), add(scale(xb, dxi), scale(xi, dxb))));
  ComplexExpr c2z = ComplexExpr(Expr(0), Expr(-1)) * (xi * xi - xb * xb + (xi * f - xb * fb) * P) * ComplexExpr(invZ);
  CForm t2num = add(add(basis(0, ComplexExpr(Q(2)) * sum * P), basis(1, c2z)),
                    scale(ComplexExpr(Expr(0), Expr(-1)) * sum, add(dxi, scale(ComplexExpr(Q(-1)), dxb))));
  CForm t2 = real_div(t2num, Q(2) * (sum + fs * P).re);
  CForm t3tail = add(basis(1, i * (xi * fb - xb * f)),
                     scale(i * ComplexExpr(Z) * fs, add(dxi, scale(ComplexExpr(Q(-1)), dxb))));
  CForm t3 = add(basis(0, ComplexExpr(Z)), real_div(t3tail, Q(2) * sum.re));
  CForm t4 = basis(1, ComplexExpr((sum + fs * P).re * pow(sum.re * psi, -1)));

  // symmetric products of complex forms: (a (.) b)_ij = a_i b_j + a_j b_i
  TetradMetric out{MetricExpr(ch, Variance::Covariant), MetricExpr(ch, Variance::Covariant)};
  auto acc = [&](const CForm& a, const CForm& b, int sign) {
    for (std::size_t r = 0; r < 4; ++r)
      for (std::size_t c = r; c < 4; ++c) {
        ComplexExpr v = a[r] * b[c] + a[c] * b[r];
        if (sign < 0) v = ComplexExpr(-v.re, -v.im);
        out.re.add(r, c, v.re);
        out.im.add(r, c, v.im);
      }
  };
  acc(t1, t4, 1);
  acc(t2, t3, -1);
  return out;
}

Expr holo_delta1(const Expr& psi) {
  Expr Z = V("Z");
  return Q(2) * Z * diff(psi, "Z") + psi;
}

Expr holo_delta2(const Expr& psi) {
  Expr Z = V("Z");
  Expr p1 = diff(psi, "Z"), p2 = diff(p1, "Z");
  return Z * Z * psi * p2 + Z * Z * p1 * p1 + Q(4) * Z * psi * p1 + psi * psi;
}

Expr holo_I(const Expr& psi) {
  Expr Z = V("Z"), k = V("kappa");
  Expr d1 = holo_delta1(psi), d2 = holo_delta2(psi);
  Expr s = Q(2) * k + Q(3) * psi;
  return Q(1152) * psi * (Q(3) * (d1 * d1 - d2) * psi - Q(2) * k * d2) * pow(Z, -2) * pow(s, -6);
}

Expr holo_J(const Expr& psi) {
  Expr Z = V("Z"), k = V("kappa");
  Expr d1 = holo_delta1(psi), d2 = holo_delta2(psi);
  Expr s = Q(2) * k + Q(3) * psi;
  return Q(41472) * d1 * psi * psi * ((Q(2) * d1 * d1 - Q(3) * d2) * psi - Q(2) * k * d2) * pow(Z, -3) * pow(s, -9);
}

Point holo_coordinate_map(const Point& p, const UnaryFunction& phi) {
  double y = p.at("y"), w = p.at("w");
  double k2 = 4 * y - w * w;
  if (!(k2 > 0)) throw DomainError("4y - w^2 must be positive", "4*y - w^2");
  Point q;
  q["x"] = p.count("x") ? p.at("x") : 0.0;
  q["Z"] = eval(phi.apply(Expr::variable("z")), {{"z", p.at("z")}});
  q["kappa"] = std::sqrt(k2);
  q["mu"] = w;
  return q;
}

Point holo_inverse_map(const Point& q, const UnaryFunction& phi, double lo, double hi) {
  Expr body = phi.apply(Expr::variable("z"));
  double Zt = q.at("Z");
  auto F = [&](double z) { return eval(body, {{"z", z}}) - Zt; };
  double flo = F(lo), fhi = F(hi);
  if (flo * fhi > 0) throw DomainError("Z outside the range of phi on the z interval", body.str());
  for (int it = 0; it < 200 && hi - lo > 1e-15 * (1 + std::abs(lo)); ++it) {
    double mid = 0.5 * (lo + hi);
    double fm = F(mid);
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  double k = q.at("kappa"), m = q.at("mu");
  Point p;
  p["x"] = q.count("x") ? q.at("x") : 0.0;
  p["y"] = (k * k + m * m) / 4;
  p["z"] = 0.5 * (lo + hi);
  p["w"] = m;
  return p;
}

double psi_consistency(const UnaryFunction& phi, const Expr& psi, const std::vector<double>& zs) {
  Expr z = Expr::variable("z");
  Expr f0 = phi.apply(z), f1 = phi.apply(z, 1);
  double worst = 0.0;
  for (double zv : zs) {
    double Zv = eval(f0, {{"z", zv}});
    double lhs = eval(f1, {{"z", zv}}) / Zv;
    double rhs = eval(psi, {{"Z", Zv}});
    worst = std::max(worst, std::abs(lhs - rhs) / (1 + std::abs(rhs)));
  }
  return worst;
}

Expr holo_ppwave_key(const std::vector<Rational>& a) {
  Expr k = V("kappa"), m = V("mu");
  ComplexExpr xi{k, m};
  ComplexExpr val, der, power{Expr(1)}, prev{Expr(0)};
  for (std::size_t n = 0; n < a.size(); ++n) {
    if (a[n] != 0) {
      val = val + ComplexExpr(Expr(a[n])) * power;
      if (n > 0) der = der + ComplexExpr(Expr(a[n] * static_cast<long>(n))) * prev;
    }
    prev = power;
    power = power * xi;
  }
  // (xi + xib)(vphi' + conj)/2 - vphi - conj = 2 kappa Re vphi' - 2 Re vphi
  Expr F = Q(2) * k * der.re - Q(2) * val.re;
  return subst(F, {{"kappa", sqrt(parse("4*y - w^2"))}, {"mu", V("w")}});
}

}  // namespace heavenly
