#pragma once

#include "heavenly/forms.hpp"
#include "heavenly/gindikin.hpp"

#include <Eigen/Dense>

#include <memory>

namespace heavenly {

enum class Variance { Covariant, Contravariant };

// Symmetric matrix of expressions on a chart. The symmetric product of two
// 1-forms, a (.) b, contributes a_i b_j + a_j b_i; the juxtaposition "a b"
// of a displayed line element is half of that.
//
// A metric may also be held implicitly as the inverse of another symbolic
// matrix (when the adjugate would be too large); entries are then only
// available numerically.
class MetricExpr {
 public:
  MetricExpr() = default;
  MetricExpr(Chart chart, Variance variance);

  const Chart& chart() const { return chart_; }
  std::size_t dim() const { return chart_.dim(); }
  Variance variance() const { return variance_; }
  bool is_symbolic() const { return !inverse_of_; }
  // Source matrix for an implicit inverse.
  const MetricExpr& inverse_source() const { return *inverse_of_; }

  const Expr& operator()(std::size_t i, std::size_t j) const;
  void set(std::size_t i, std::size_t j, const Expr& e);  // keeps symmetry
  void add(std::size_t i, std::size_t j, const Expr& e);
  // Adds c * (a (.) b) for two 1-forms of lambda-degree 0.
  void add_symmetric_product(const LambdaPolyForm& a, const LambdaPolyForm& b, const Expr& c = Expr(1));

  MetricExpr map(const std::function<Expr(const Expr&)>& f) const;
  MetricExpr scaled(const Expr& c) const;

  Eigen::MatrixXd at(const Point& p, const Bindings& bindings = {}) const;
  std::size_t node_budget_size() const;

  static MetricExpr implicit_inverse(const MetricExpr& source);

 private:
  Chart chart_;
  Variance variance_ = Variance::Covariant;
  std::vector<Expr> entries_;
  std::shared_ptr<const MetricExpr> inverse_of_;
};

Json to_json(const MetricExpr& g);

class SingularMetric : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// General heavenly matrix (1/J)[...] with J = f14 f23 - f13 f24. The entries
// involve only second derivatives of f.
MetricExpr general_heavenly_metric(const Expr& f);
Expr general_heavenly_jacobian(const Expr& f);

MetricExpr plebanski_I_metric(const Expr& theta);   // (r,s,z,w)
MetricExpr plebanski_II_metric(const Expr& theta);  // (x,y,z,w)

// Contravariant matrices of the twisted metrics. phi is an opaque symbol
// "phi" of z unless a definition is supplied.
MetricExpr twisted_inverse_I(const Expr& theta, const TwistFunction& phi);
MetricExpr twisted_inverse_II(const Expr& theta, const TwistFunction& phi);
// phi (phi' theta_ww + phi) and phi' theta_yy + phi.
Expr twisted_conformal_factor_I(const Expr& theta, const TwistFunction& phi);
Expr twisted_conformal_factor_II(const Expr& theta, const TwistFunction& phi);

// Numeric value of the coordinate matrix of a 2-form (entry (i,j), i<j, is
// the coefficient of dx^i ^ dx^j).
Eigen::MatrixXd form_matrix(const LambdaPolyForm& beta2, const Point& p, const Bindings& bindings = {});

struct Homogeneous {
  Rational first, second;
};

// Covariant metric -1/(m0 n1 - m1 n0) [B(m+n) - B(m) - B(n)] [B(m) + B(n)]^-1 [B(m) - B(n)]
// with B the homogenized quadratic structure. Symbolic (the skew inverse uses
// the Pfaffian).
MetricExpr gindikin_reconstruct(const GindikinCandidate& beta, const Homogeneous& mu, const Homogeneous& nu);

MetricExpr frame_metric(const LambdaPolyForm& gamma0, const LambdaPolyForm& gamma1, const LambdaPolyForm& delta0,
                        const LambdaPolyForm& delta1);

// Adjugate inverse; falls back to an implicit (numeric) inverse when the
// symbolic result would exceed node_budget.
MetricExpr invert_metric(const MetricExpr& g, std::size_t node_budget = 20000);

Expr determinant(const MetricExpr& g);

// Largest |g(X, X)| / (|g| |X|^2) over kernel vectors of beta^lambda for the
// panel values, at one point. g covariant.
double null_plane_defect(const MetricExpr& g, const GindikinCandidate& beta, const Point& p,
                         const Bindings& bindings = {});

}  // namespace heavenly
