#include "heavenly/sampling.hpp"

#include <cmath>
#include <stdexcept>

namespace heavenly {

double Rng::uniform(double lo, double hi) {
  double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

int Rng::integer(int lo, int hi) {
  auto span = static_cast<std::uint64_t>(hi - lo + 1);
  return lo + static_cast<int>(engine_() % span);
}

Rational Rng::rational(int lo, int hi, int max_den) {
  int den = integer(1, max_den);
  int num = integer(lo * den, hi * den);
  return Rational(num, den);
}

Domain::Domain(std::vector<Interval> box, std::vector<Guard> guards)
    : box_(std::move(box)), guards_(std::move(guards)) {
  for (const auto& iv : box_) {
    if (!(iv.lo <= iv.hi)) throw std::invalid_argument("empty interval for '" + iv.name + "'");
  }
}

std::vector<std::string> Domain::variables() const {
  std::vector<std::string> out;
  for (const auto& iv : box_) out.push_back(iv.name);
  return out;
}

Domain Domain::with_guard(Guard g) const {
  Domain d = *this;
  d.guards_.push_back(std::move(g));
  return d;
}

Domain Domain::with_interval(const Interval& iv) const {
  Domain d = *this;
  for (auto& existing : d.box_) {
    if (existing.name == iv.name) {
      existing = iv;
      return d;
    }
  }
  d.box_.push_back(iv);
  return d;
}

std::string Domain::violation(const Point& p, const Bindings& bindings) const {
  for (const auto& g : guards_) {
    double v = 0.0;
    try {
      v = eval(g.expr, p, bindings);
    } catch (const DomainError&) {
      return g.label.empty() ? g.expr.str() : g.label;
    }
    double lhs = g.absolute ? std::fabs(v) : v;
    if (!(lhs >= g.bound)) return g.label.empty() ? g.expr.str() : g.label;
  }
  return {};
}

std::vector<Point> sample_points(const Domain& domain, std::size_t count, std::uint64_t seed,
                                 const Bindings& bindings) {
  Rng rng(seed);
  std::vector<Point> out;
  out.reserve(count);
  std::size_t attempts = 0;
  const std::size_t limit = 1000 * (count + 1);
  std::string last;
  while (out.size() < count) {
    if (++attempts > limit)
      throw std::runtime_error("sampling rejected too many points (last failing guard: " + last + ")");
    Point p;
    for (const auto& iv : domain.box()) p[iv.name] = rng.uniform(iv.lo, iv.hi);
    last = domain.violation(p, bindings);
    if (last.empty()) out.push_back(std::move(p));
  }
  return out;
}

}  // namespace heavenly
