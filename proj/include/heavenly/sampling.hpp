#pragma once

#include "heavenly/eval.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace heavenly {

// Deterministic generator; the mapping from raw bits to doubles is done
// here so that streams do not depend on the standard library's
// distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform(double lo, double hi);
  int integer(int lo, int hi);  // inclusive
  // Rational in [lo, hi] with denominator in [1, max_den].
  Rational rational(int lo, int hi, int max_den);

 private:
  std::mt19937_64 engine_;
};

struct Interval {
  std::string name;
  double lo = -1.0;
  double hi = 1.0;
};

// Admissibility predicate: expr >= bound, or |expr| >= bound when absolute.
struct Guard {
  Expr expr;
  double bound = 0.0;
  bool absolute = false;
  std::string label;
};

class Domain {
 public:
  Domain() = default;
  Domain(std::vector<Interval> box, std::vector<Guard> guards = {});

  const std::vector<Interval>& box() const { return box_; }
  const std::vector<Guard>& guards() const { return guards_; }
  std::vector<std::string> variables() const;

  Domain with_guard(Guard g) const;
  Domain with_interval(const Interval& iv) const;  // replaces an existing name

  // Empty when admissible, otherwise the label of the first failing guard.
  std::string violation(const Point& p, const Bindings& bindings = {}) const;

 private:
  std::vector<Interval> box_;
  std::vector<Guard> guards_;
};

// Rejection sampling inside the box; throws when guards reject too often.
std::vector<Point> sample_points(const Domain& domain, std::size_t count, std::uint64_t seed,
                                 const Bindings& bindings = {});

}  // namespace heavenly
