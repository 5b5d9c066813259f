#pragma once

#include "heavenly/forms.hpp"
#include "heavenly/report.hpp"

#include <optional>

namespace heavenly {

struct GindikinCandidate {
  LambdaPolyForm form;
  int expected_degree = 2;  // chart dimension - 2
  std::vector<Rational> panel;  // nondegeneracy panel

  GindikinCandidate() = default;
  explicit GindikinCandidate(LambdaPolyForm f);
};

// ---- structures -------------------------------------------------------------

// sum_i (l_{n+1} - l_i) f_i prod_{j != i} (lambda - l_j) dx^i on an n-chart.
LambdaPolyForm veronese_alpha(const Chart& chart, const Expr& f, const std::vector<Rational>& lambdas);
// sum_{i<j} (l_i - l_j) f_ij prod_{k != i,j} (lambda - l_k) dx^i ^ dx^j.
LambdaPolyForm general_heavenly_beta(const Chart& chart, const Expr& f, const std::vector<Rational>& lambdas);
LambdaPolyForm plebanski_I_beta(const Expr& theta);     // (r,s,z,w)
LambdaPolyForm plebanski_I_beta5(const Expr& Theta);    // (r,s,z,w,u)
LambdaPolyForm plebanski_II_beta(const Expr& theta);    // (x,y,z,w)
LambdaPolyForm plebanski_II_beta5(const Expr& Theta);   // (x,y,z,w,u)
// Veronese 1-forms of the Hirota-type systems on the slice u = 1; their
// lambda = 0 value is dz.
LambdaPolyForm plebanski_I_alpha(const Expr& theta);    // (r,s,z,w)
LambdaPolyForm plebanski_II_alpha(const Expr& theta);   // (x,y,z,w)

// Coframe of the first Plebanski structure: beta = (g0 + l g1) ^ (d0 + l d1).
struct Coframe {
  LambdaPolyForm gamma0, gamma1, delta0, delta1;
};
Coframe plebanski_I_coframe(const Expr& theta);

const Chart& chart_I4();
const Chart& chart_I5();
const Chart& chart_II4();
const Chart& chart_II5();
Chart chart_general(int n);

// ---- checks -----------------------------------------------------------------

ResidualReport check_closed(const GindikinCandidate& g, const std::vector<Point>& sample,
                            const Bindings& bindings = {}, double tolerance = 1e-8);
ResidualReport check_simple(const GindikinCandidate& g, const std::vector<Point>& sample,
                            const Bindings& bindings = {}, double tolerance = 1e-8);

struct NondegeneracyReport {
  double min_abs = 0.0;  // smallest top coefficient over panel pairs and points
  std::size_t pairs = 0;
  std::size_t points = 0;
  double threshold = 1e-8;
  bool nondegenerate() const { return min_abs > threshold; }
};
NondegeneracyReport check_nondegenerate(const GindikinCandidate& g, const std::vector<Point>& sample,
                                        const Bindings& bindings = {}, double threshold = 1e-8);

struct SymmetryCertificate {
  LambdaVectorField K;
  Rational c;
  ResidualReport report;
  bool certified() const { return report.pass(); }
};
SymmetryCertificate check_symmetry(const GindikinCandidate& g, const LambdaVectorField& K, const Rational& c,
                                   const std::vector<Point>& sample, const Bindings& bindings = {},
                                   double tolerance = 1e-8);

class HypothesisFailure : public std::runtime_error {
 public:
  HypothesisFailure(const std::string& what, ResidualReport report);
  const ResidualReport& report() const { return report_; }

 private:
  ResidualReport report_;
};

// alpha = K ^| beta, after certifying symmetry with c = 1, closedness, and
// d(alpha) = beta on the sample.
LambdaPolyForm potential(const GindikinCandidate& g, const LambdaVectorField& K, const std::vector<Point>& sample,
                         const Bindings& bindings = {}, double tolerance = 1e-8);

struct TwistFunction {
  std::string name = "phi";
  std::optional<UnaryFunction> definition;  // opaque when empty
};

// divide_linear(d(phi(psi) alpha), lambda0), after checking that
// alpha(lambda0) is closed and proportional to d psi.
GindikinCandidate twist(const LambdaPolyForm& alpha, const Expr& psi, const TwistFunction& phi,
                        const Rational& lambda0);
GindikinCandidate twist(const LambdaPolyForm& alpha, const std::string& psi_coordinate, const TwistFunction& phi,
                        const Rational& lambda0);

}  // namespace heavenly
