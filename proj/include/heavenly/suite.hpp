#pragma once

#include "heavenly/catalog.hpp"

namespace heavenly {

// One numbered acceptance criterion. measured is the worst value of the
// headline quantity, compared against tolerance in the stated direction.
struct CriterionResult {
  int number = 0;
  std::string name;
  bool pass = false;
  double measured = 0.0;
  double tolerance = 0.0;
  std::string summary;  // one line for humans
  Json detail;
};

struct SuiteOptions {
  std::uint64_t seed = 20240917;
  // Sample sizes fixed by the acceptance contract; smaller values are only
  // useful for smoke runs.
  std::size_t residual_points = 100;
  std::size_t curvature_points = 50;
  std::size_t invariant_points = 20;
  std::size_t jets = 50;
  std::size_t probes = 200;
};

// Results of check_entry over the whole catalog (or one framework), sorted
// by entry id.
struct CatalogRun {
  std::vector<ExpectationResult> results;
  std::map<std::string, std::string> build_errors;  // id -> message
  bool all_ok() const;
};
CatalogRun run_catalog(const CheckOptions& options, std::optional<Framework> framework = std::nullopt);
Json to_json(const CatalogRun& run);

CriterionResult criterion(int number, const SuiteOptions& options = {});
std::vector<CriterionResult> run_acceptance(const SuiteOptions& options = {});
Json to_json(const CriterionResult& c);
std::string format_line(const CriterionResult& c);  // "PASS [n] name: summary"

// Calibration of the invariant normalization at Psi = 1/Z, Z = kappa = 1,
// mu = 0.3 (raw trace invariants of the twisted metric vs the closed forms).
struct Calibration {
  double kappa_I = 1.0, kappa_J = 1.0;
  double raw_I = 0.0, raw_J = 0.0;
  double closed_I = 0.0, closed_J = 0.0;
  Point point;  // chart point used
};
Calibration calibrate_invariants();

}  // namespace heavenly
