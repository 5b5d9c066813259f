#pragma once

#include "heavenly/holo.hpp"
#include "heavenly/curvature.hpp"
#include "heavenly/equations.hpp"
#include "heavenly/gindikin.hpp"
#include "heavenly/metrics.hpp"
#include "heavenly/sampling.hpp"

#include <optional>

namespace heavenly {

enum class Framework { General, I, II };
std::string to_string(Framework f);
Framework framework_from_string(const std::string& s);

// One checkable claim about an entry. kind is one of
//   residual (target = system id), closed, simple, nondegenerate, degenerate,
//   symmetry, potential, mason_newman, sdve, flat, weyl_nonzero,
//   invariants_zero, special_nonzero, not_special, closed_form,
//   display_metric, cross_pipeline, gauge, null_plane, spinor_path,
//   fd_oracle.
// pass = false marks an expected failure (non-solutions).
struct Expectation {
  std::string kind;
  std::string target;
  bool pass = true;
  double threshold = 0.0;  // kind-specific (e.g. the lower bound for not_special)
};

struct CatalogEntry {
  std::string id;
  Framework framework = Framework::II;
  std::string description;
  Chart chart;
  std::string key;                                 // expression text, may mention parameters
  std::map<std::string, Rational> parameters;      // defaults
  std::optional<std::string> twist;                // phi as a function of z
  std::optional<std::string> psi;                  // Psi(Z) of the complex chart
  std::vector<Interval> box;
  std::vector<std::pair<std::string, double>> guards;  // expr >= bound
  std::vector<Rational> lambdas;                   // general framework
  std::map<std::string, std::string> symmetry;     // K components by coordinate
  std::vector<Expectation> expects;
};

const std::vector<CatalogEntry>& catalog();
const CatalogEntry& catalog_entry(const std::string& id);  // throws std::invalid_argument
std::vector<std::string> catalog_ids();

// Entry with parameters substituted and its derived objects built.
struct BoundEntry {
  const CatalogEntry* entry = nullptr;
  Expr key;
  Domain domain;
  std::optional<TwistFunction> phi;
  std::optional<GindikinCandidate> beta;   // structure the metric comes from
  std::optional<MetricExpr> metric;        // covariant or contravariant
};

class GuardError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

BoundEntry build(const std::string& id, const std::map<std::string, Rational>& parameters = {});
// Same, with the key function replaced (e.g. a user pp-wave profile).
BoundEntry build_with_key(const std::string& id, const Expr& key,
                          const std::map<std::string, Rational>& parameters = {});
// Untwisted 4D entry twisted by phi (text in z, or in any single variable).
// General-framework entries get the reconstructed metric.
BoundEntry build_twisted(const std::string& id, const Expr& key, const std::string& phi,
                         const std::map<std::string, Rational>& parameters = {});

struct CheckOptions {
  std::size_t residual_points = 100;
  std::size_t structure_points = 100;
  std::size_t curvature_points = 50;
  std::size_t invariant_points = 20;
  std::size_t pipeline_points = 50;
  std::uint64_t seed = 20240917;
  std::optional<double> tolerance;  // overrides every kind's default
  std::set<std::string> kinds;      // empty: all
};

struct ExpectationResult {
  std::string entry;
  Expectation expectation;
  bool observed = false;  // did the underlying check pass
  double measured = 0.0;  // headline number (max residual, min |S|, ...)
  double tolerance = 0.0;
  Json detail;
  bool ok() const { return observed == expectation.pass; }
};

std::vector<ExpectationResult> check_entry(const BoundEntry& b, const CheckOptions& options = {});
Json to_json(const ExpectationResult& r);
Json to_json(const CatalogEntry& e);

// Invariants of the entry's metric at one point (chart coordinates).
WeylData entry_invariants(const BoundEntry& b, const Point& p);

// Sample of the entry's domain.
std::vector<Point> entry_sample(const BoundEntry& b, std::size_t count, std::uint64_t seed);

}  // namespace heavenly
