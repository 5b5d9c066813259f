#pragma once

#include "heavenly/gindikin.hpp"
#include "heavenly/metrics.hpp"

#include <Eigen/Dense>

#include <array>
#include <optional>

namespace heavenly {

// Tensors of a 4D metric at one point. Index order: Gamma(a,b,c) = Gamma^a_bc,
// riemann(a,b,c,d) = R^a_bcd.
struct CurvatureAt {
  std::size_t n = 4;
  Eigen::MatrixXd g, ginv;
  std::vector<double> gamma;    // n^3
  std::vector<double> riemann;  // n^4
  Eigen::MatrixXd ricci;
  double scalar = 0.0;

  double Gamma(std::size_t a, std::size_t b, std::size_t c) const { return gamma[(a * n + b) * n + c]; }
  double R(std::size_t a, std::size_t b, std::size_t c, std::size_t d) const {
    return riemann[((a * n + b) * n + c) * n + d];
  }
  double riemann_norm() const;  // max |R^a_bcd|
  double ricci_norm() const;    // max |Ric_ab|
  // Worst relative violation of pair antisymmetry and the first Bianchi
  // identity (lowered first index).
  double symmetry_defect() const;
};

// Symbolic jets of the metric entries (to second order), compiled once and
// evaluated per point. Contravariant and implicit metrics are handled by
// differentiating the stored matrix and inverting numerically.
class CurvatureEngine {
 public:
  CurvatureEngine() = default;
  explicit CurvatureEngine(const MetricExpr& g, const Bindings& bindings = {});

  const Chart& chart() const { return chart_; }
  CurvatureAt at(const Point& p) const;
  // g, dg[c], ddg[c*n+d] of the covariant metric.
  void metric_jet(const Point& p, Eigen::MatrixXd& g, std::vector<Eigen::MatrixXd>& dg,
                  std::vector<Eigen::MatrixXd>& ddg) const;

 private:
  Chart chart_;
  bool contravariant_ = false;
  bool implicit_ = false;
  Program program_;
};

// Symbolic Christoffel symbols Gamma^a_bc for a covariant symbolic metric
// (uses invert_metric; throws when only an implicit inverse is available).
std::vector<Expr> christoffel(const MetricExpr& g);

// Finite-difference oracle: Gamma from central differences of g, Riemann
// from central differences of that Gamma.
CurvatureAt fd_curvature(const MetricExpr& g, const Point& p, const Bindings& bindings = {}, double h = 1e-3);

// ---- Weyl operator and invariants -------------------------------------------

struct WeylData {
  std::vector<std::string> basis;       // ids of the self-dual basis 2-forms
  Eigen::Matrix3d W = Eigen::Matrix3d::Zero();  // operator on the curved half
  std::optional<std::array<double, 5>> spinor;
  double I = 0.0, J = 0.0, S = 0.0;
  double kappa_I = 1.0, kappa_J = 1.0;
  double trace = 0.0;              // tr W (should vanish)
  double invariance_residual = 0.0;  // curved half mapped into itself
  double flat_half_residual = 0.0;   // |W beta| for the structure's 2-forms
  double ricci = 0.0;                // max |Ric| at the point
};

// Bivector operator W[(ab),(cd)] = g^{be} R^a_{ecd} on pairs a<b, c<d.
Eigen::Matrix<double, 6, 6> bivector_operator(const CurvatureAt& c);

// I = kI tr(W^2), J = kJ tr(W^3). With beta, W is restricted to the bivectors
// annihilated by the beta coefficients (the curved half), and the residual of
// W on the raised beta coefficients is reported.
WeylData selfdual_weyl(const CurvatureAt& c, const GindikinCandidate* beta = nullptr, const Point& p = {},
                       const Bindings& bindings = {}, double kappa_I = 1.0, double kappa_J = 1.0);

// Spinor path for the second framework: fourth derivatives of theta in the
// y, x directions. Returns C0..C4 as expressions.
std::array<Expr, 5> plebanski_II_spinor(const Expr& theta);
WeylData plebanski_II_weyl(const Expr& theta, const Point& p, const Bindings& bindings = {});

struct InvariantsReport {
  double I = 0.0, J = 0.0, S = 0.0;
  bool special = false;
  double tolerance = 1e-8;
};
InvariantsReport invariants_report(const WeylData& w, double tolerance = 1e-8);

Json to_json(const WeylData& w);
Json to_json(const InvariantsReport& r);

}  // namespace heavenly
