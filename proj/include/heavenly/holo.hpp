#pragma once

#include "heavenly/metrics.hpp"

namespace heavenly {

// Complex value held as real and imaginary expressions; used only for the
// holomorphic pp-wave data (xi = kappa + i mu).
struct ComplexExpr {
  Expr re, im;

  ComplexExpr() = default;
  ComplexExpr(Expr r, Expr i = Expr(0)) : re(std::move(r)), im(std::move(i)) {}

  ComplexExpr conj() const { return {re, -im}; }
  friend ComplexExpr operator+(const ComplexExpr& a, const ComplexExpr& b) { return {a.re + b.re, a.im + b.im}; }
  friend ComplexExpr operator-(const ComplexExpr& a, const ComplexExpr& b) { return {a.re - b.re, a.im - b.im}; }
  friend ComplexExpr operator*(const ComplexExpr& a, const ComplexExpr& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
};
ComplexExpr imaginary_unit();

// Coordinates of the complex pp-wave description: x, Z = phi(z),
// kappa = sqrt(4y - w^2), mu = w.
const Chart& chart_holo();

// Displayed metric of the cubic pp-wave twisted by phi, written through
// Psi(Z) = phi'(z(Z)) / Z. psi is an expression in Z.
MetricExpr holo_metric(const Expr& psi);

// Same metric assembled from the complex null tetrad (constant f = 3/2 for the
// cubic data); g = t1 (.) t4 - t2 (.) t3. The imaginary part must vanish.
struct TetradMetric {
  MetricExpr re, im;
};
TetradMetric holo_tetrad_metric(const Expr& psi, const Rational& f = Rational(3, 2));

// Closed forms of the invariants and the auxiliary Delta_1, Delta_2.
Expr holo_delta1(const Expr& psi);
Expr holo_delta2(const Expr& psi);
Expr holo_I(const Expr& psi);
Expr holo_J(const Expr& psi);

// (x, y, z, w) -> (x, Z, kappa, mu). Throws DomainError when 4y - w^2 <= 0.
Point holo_coordinate_map(const Point& p, const UnaryFunction& phi);
// Inverse map for an increasing or decreasing phi (bisection on z_range).
Point holo_inverse_map(const Point& q, const UnaryFunction& phi, double z_lo, double z_hi);

// Max relative mismatch of phi'(z) / phi(z) against psi(phi(z)) on the given z values.
double psi_consistency(const UnaryFunction& phi, const Expr& psi, const std::vector<double>& zs);

// Real key function F(y, w) = (xi + xib)(vphi' + conj vphi')/2 - vphi - conj vphi
// for a polynomial vphi with rational coefficients (lowest power first).
Expr holo_ppwave_key(const std::vector<Rational>& coefficients);

}  // namespace heavenly
