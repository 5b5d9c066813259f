#pragma once

#include "heavenly/forms.hpp"
#include "heavenly/report.hpp"
#include "heavenly/sampling.hpp"

#include <functional>
#include <string>
#include <vector>

namespace heavenly {

struct NamedExpr {
  std::string name;
  Expr expr;
};

// Returns the partial derivative of the key function along the listed
// coordinates (empty list: the function itself).
using DerivativeSource = std::function<Expr(const std::vector<std::string>&)>;

DerivativeSource derivatives_of(const Expr& key);
// Derivatives as free symbols "f_x1x2", for jet-level (algebraic) checks.
DerivativeSource jet_symbols(const std::string& stem = "f");
std::string jet_symbol(const std::string& stem, std::vector<std::string> vars);

struct SystemInfo {
  std::string id;
  std::string title;
  Chart chart;
  std::size_t lambda_count = 0;  // number of spectral parameters used
  std::vector<std::string> equations;
};

const std::vector<SystemInfo>& systems();
const SystemInfo& system_info(const std::string& id);  // throws std::invalid_argument

class LambdaCollision : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

std::vector<Rational> default_lambdas(std::size_t count);

// The residual expressions of a system for the given derivative source.
std::vector<NamedExpr> system_equations(const std::string& id, const DerivativeSource& d,
                                        const std::vector<Rational>& lambdas);

// Full residual run: chart check, lambda checks, measurement.
ResidualReport residual(const std::string& id, const Expr& key, const std::vector<Rational>& lambdas,
                        const std::vector<Point>& sample, const Bindings& bindings = {}, double tolerance = 1e-8);

// Default sampling box for a system's chart.
Domain default_domain(const std::string& id);

// ---- jet identities -------------------------------------------------------

// Values of f_i and f_ij (keys "f_x1", "f_x1x2", ... as from jet_symbols).
template <class T>
using Jet = std::map<std::string, T>;

Jet<Rational> random_rational_jet(Rng& rng, const std::vector<std::string>& coords, int order = 2);
Jet<double> to_double(const Jet<Rational>& jet);

class GuardViolation : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// eq4 * f1 (l1 - l5) - (f4 (l4 - l5) eq1 - f3 (l3 - l5) eq2 + f2 (l2 - l5) eq3),
// i.e. the algebraic dependence of the four Hirota equations. Throws
// GuardViolation when f1 == 0 or l1 == l5.
Rational hirota_dependence_exact(const Jet<Rational>& jet, const std::vector<Rational>& lambdas);
// Relative form |eq4 - combination| / (1 + max |term|).
double hirota_dependence_check(const Jet<double>& jet, const std::vector<Rational>& lambdas);

// Skew matrix M of the Hirota system read as linear equations in
// (f4, f3, f2, f1), with the system matrix equal to M * D.
std::vector<std::vector<Expr>> hirota_skew_matrix(const std::vector<Rational>& lambdas);

struct PfaffianCalibration {
  Rational kappa;  // Pf(M) = kappa * heavenly LHS
  Jet<Rational> jet;
};
PfaffianCalibration calibrate_pfaffian(const Jet<Rational>& jet, const std::vector<Rational>& lambdas);
// |Pf(M) - kappa * heav| / (1 + |Pf(M)| + |kappa * heav|)
double pfaffian_check(const Jet<double>& jet, const std::vector<Rational>& lambdas, const Rational& kappa);

// Second jets of a 5D key function satisfying the three I-heavenly
// equations exactly (keys "T_rz", ...). Free data drawn from rng.
Jet<Rational> ih5d_solution_jet(Rng& rng);

// ---- Mason-Newman fields ---------------------------------------------------

enum class MNFramework { I4D, I5D };

struct MasonNewman {
  std::vector<LambdaVectorField> fields;
  LambdaPolyForm volume;
};

MasonNewman mason_newman_fields(MNFramework framework, const Expr& key);
// Pairwise commutators, identically in lambda, over the sample.
ResidualReport commutator_check(const std::vector<LambdaVectorField>& fields, const std::vector<Point>& sample,
                                const Bindings& bindings = {}, double tolerance = 1e-8);
// d(X ^| omega) for each field.
ResidualReport divergence_check(const std::vector<LambdaVectorField>& fields, const LambdaPolyForm& volume,
                                const std::vector<Point>& sample, const Bindings& bindings = {},
                                double tolerance = 1e-8);

// ---- separation -----------------------------------------------------------

// For f = h * q(x5): each 5D equation minus q q' times the matching 4D
// Hirota equation of h (eq_{ijk5} <-> hirota eq ijk, eq1234 <-> heav).
// Vanishes for arbitrary h.
ResidualReport separation_check(const Expr& h, const UnaryFunction& q, const std::vector<Rational>& lambdas,
                                const std::vector<Point>& sample, double tolerance = 1e-8);

}  // namespace heavenly
