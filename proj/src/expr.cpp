#include "expr_node.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <unordered_map>
#include <unordered_set>

namespace heavenly {

namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

std::size_t hash_rational(const Rational& r) {
  std::size_t h = std::hash<std::string>{}(numerator(r).str());
  return mix(h, std::hash<std::string>{}(denominator(r).str()));
}

int kind_rank(NodeKind k) { return static_cast<int>(k); }

const std::vector<Expr> kNoArgs;

bool is_integer(const Rational& q) { return denominator(q) == 1; }

// Exact integer n-th root when it exists.
std::optional<Integer> exact_root(const Integer& x, unsigned n) {
  if (x < 0) return std::nullopt;
  if (x == 0 || x == 1) return x;
  double guess = std::pow(static_cast<double>(x), 1.0 / n);
  if (!std::isfinite(guess)) return std::nullopt;
  Integer base(static_cast<long long>(std::llround(guess)));
  for (int delta = -1; delta <= 1; ++delta) {
    Integer c = base + delta;
    if (c < 0) continue;
    if (boost::multiprecision::pow(c, n) == x) return c;
  }
  return std::nullopt;
}

Rational rational_pow(const Rational& b, long long n) {
  if (n == 0) return Rational(1);
  if (b == 0 && n < 0) throw std::domain_error("division by zero");
  Integer num = boost::multiprecision::pow(numerator(b), static_cast<unsigned>(std::llabs(n)));
  Integer den = boost::multiprecision::pow(denominator(b), static_cast<unsigned>(std::llabs(n)));
  if (n < 0) std::swap(num, den);
  // cpp_rational rejects a negative denominator in this constructor.
  if (den < 0) {
    num = -num;
    den = -den;
  }
  return Rational(num, den);
}

}  // namespace

std::uint64_t name_bit(const std::string& name) {
  return std::uint64_t{1} << (std::hash<std::string>{}(name) % 64);
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

std::string to_string(const Rational& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

Rational parse_rational(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty number");
  std::size_t slash = text.find('/');
  if (slash != std::string::npos) {
    Rational n = parse_rational(text.substr(0, slash));
    Rational d = parse_rational(text.substr(slash + 1));
    if (d == 0) throw std::invalid_argument("zero denominator in '" + text + "'");
    return n / d;
  }
  std::size_t i = 0;
  bool neg = false;
  if (text[i] == '+' || text[i] == '-') neg = text[i++] == '-';
  Integer mant = 0;
  long long scale = 0;
  bool any = false, dot = false;
  for (; i < text.size(); ++i) {
    char c = text[i];
    if (c >= '0' && c <= '9') {
      mant = mant * 10 + (c - '0');
      if (dot) --scale;
      any = true;
    } else if (c == '.' && !dot) {
      dot = true;
    } else {
      break;
    }
  }
  if (!any) throw std::invalid_argument("malformed number '" + text + "'");
  if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
    ++i;
    bool eneg = false;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) eneg = text[i++] == '-';
    long long e = 0;
    bool edig = false;
    for (; i < text.size() && text[i] >= '0' && text[i] <= '9'; ++i) {
      e = e * 10 + (text[i] - '0');
      edig = true;
      if (e > 4000) throw std::invalid_argument("exponent too large in '" + text + "'");
    }
    if (!edig) throw std::invalid_argument("malformed exponent in '" + text + "'");
    scale += eneg ? -e : e;
  }
  if (i != text.size()) throw std::invalid_argument("malformed number '" + text + "'");
  Rational r(mant);
  r *= rational_pow(Rational(10), scale);
  return neg ? -r : r;
}

// ---------------------------------------------------------------- factory

Expr NodeFactory::constant(const Rational& v) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::Constant;
  n->value = v;
  n->hash = mix(1, hash_rational(v));
  return Expr(std::move(n));
}

Expr NodeFactory::variable(const std::string& name) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::Variable;
  n->name = name;
  n->hash = mix(2, std::hash<std::string>{}(name));
  n->mask = name_bit(name);
  return Expr(std::move(n));
}

Expr NodeFactory::function(const std::string& name, int order, const Expr& arg) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::Function;
  n->name = name;
  n->order = order;
  n->args = {arg};
  n->hash = mix(mix(mix(3, std::hash<std::string>{}(name)), static_cast<std::size_t>(order)), arg.hash());
  n->mask = arg.symbol_mask();
  return Expr(std::move(n));
}

Expr NodeFactory::power(const Expr& base, const Rational& q) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::Power;
  n->value = q;
  n->args = {base};
  n->hash = mix(mix(4, base.hash()), hash_rational(q));
  n->mask = base.symbol_mask();
  return Expr(std::move(n));
}

Expr NodeFactory::unary(NodeKind kind, const Expr& arg) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->args = {arg};
  n->hash = mix(static_cast<std::size_t>(kind) + 11, arg.hash());
  n->mask = arg.symbol_mask();
  return Expr(std::move(n));
}

Expr NodeFactory::nary(NodeKind kind, std::vector<Expr> args) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  std::size_t h = static_cast<std::size_t>(kind) + 17;
  std::uint64_t m = 0;
  for (const auto& a : args) {
    h = mix(h, a.hash());
    m |= a.symbol_mask();
  }
  n->hash = h;
  n->mask = m;
  n->args = std::move(args);
  return Expr(std::move(n));
}

// ---------------------------------------------------------------- Expr

namespace {
const Expr& zero_expr() {
  static const Expr z = NodeFactory::constant(Rational(0));
  return z;
}
}  // namespace

Expr::Expr() : node_(zero_expr().node_) {}
Expr::Expr(int value) : Expr(NodeFactory::constant(Rational(value))) {}
Expr::Expr(long value) : Expr(NodeFactory::constant(Rational(value))) {}
Expr::Expr(long long value) : Expr(NodeFactory::constant(Rational(value))) {}
Expr::Expr(const Rational& value) : Expr(NodeFactory::constant(value)) {}

Expr Expr::variable(const std::string& name) {
  if (name.empty()) throw std::invalid_argument("empty variable name");
  return NodeFactory::variable(name);
}

Expr Expr::function(const std::string& name, int order, const Expr& arg) {
  if (name.empty()) throw std::invalid_argument("empty function name");
  if (order < 0) throw std::invalid_argument("negative derivative order");
  return NodeFactory::function(name, order, arg);
}

NodeKind Expr::kind() const { return node_->kind; }
bool Expr::is_zero() const { return node_->kind == NodeKind::Constant && node_->value == 0; }
bool Expr::is_one() const { return node_->kind == NodeKind::Constant && node_->value == 1; }

const Rational& Expr::value() const {
  if (node_->kind != NodeKind::Constant) throw std::logic_error("value() on non-constant");
  return node_->value;
}
const Rational& Expr::exponent() const {
  if (node_->kind != NodeKind::Power) throw std::logic_error("exponent() on non-power");
  return node_->value;
}
const std::string& Expr::name() const { return node_->name; }
int Expr::order() const { return node_->order; }
const std::vector<Expr>& Expr::args() const { return node_->args.empty() ? kNoArgs : node_->args; }
std::size_t Expr::hash() const { return node_->hash; }
std::uint64_t Expr::symbol_mask() const { return node_->mask; }

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  if (a.hash() != b.hash()) return false;
  return compare(a, b) == 0;
}

int compare(const Expr& a, const Expr& b) {
  if (a.get() == b.get()) return 0;
  int ra = kind_rank(a.kind()), rb = kind_rank(b.kind());
  if (ra != rb) return ra < rb ? -1 : 1;
  switch (a.kind()) {
    case NodeKind::Constant:
      if (a.value() == b.value()) return 0;
      return a.value() < b.value() ? -1 : 1;
    case NodeKind::Variable: {
      int c = a.name().compare(b.name());
      return c < 0 ? -1 : (c > 0 ? 1 : 0);
    }
    case NodeKind::Function: {
      int c = a.name().compare(b.name());
      if (c != 0) return c < 0 ? -1 : 1;
      if (a.order() != b.order()) return a.order() < b.order() ? -1 : 1;
      return compare(a.arg(0), b.arg(0));
    }
    case NodeKind::Power: {
      int c = compare(a.arg(0), b.arg(0));
      if (c != 0) return c;
      if (a.exponent() == b.exponent()) return 0;
      return a.exponent() < b.exponent() ? -1 : 1;
    }
    case NodeKind::Exp:
    case NodeKind::Log:
      return compare(a.arg(0), b.arg(0));
    case NodeKind::Product:
    case NodeKind::Sum: {
      const auto& x = a.args();
      const auto& y = b.args();
      std::size_t n = std::min(x.size(), y.size());
      for (std::size_t i = 0; i < n; ++i) {
        int c = compare(x[i], y[i]);
        if (c != 0) return c;
      }
      if (x.size() == y.size()) return 0;
      return x.size() < y.size() ? -1 : 1;
    }
  }
  return 0;
}

// ---------------------------------------------------------------- canonical builders

std::pair<Rational, Expr> split_coefficient(const Expr& e) {
  if (e.kind() == NodeKind::Constant) return {e.value(), Expr(1)};
  if (e.kind() == NodeKind::Product && e.arg(0).kind() == NodeKind::Constant) {
    const auto& a = e.args();
    if (a.size() == 2) return {a[0].value(), a[1]};
    return {a[0].value(), NodeFactory::nary(NodeKind::Product, std::vector<Expr>(a.begin() + 1, a.end()))};
  }
  return {Rational(1), e};
}

namespace {

// c*rest where rest is already canonical and coefficient-free.
Expr scaled(const Rational& c, const Expr& rest) {
  if (c == 0) return Expr(0);
  if (rest.is_one()) return Expr(c);
  if (c == 1) return rest;
  if (rest.kind() == NodeKind::Product) {
    std::vector<Expr> f;
    f.reserve(rest.size() + 1);
    f.push_back(Expr(c));
    for (const auto& a : rest.args()) f.push_back(a);
    return NodeFactory::nary(NodeKind::Product, std::move(f));
  }
  if (rest.kind() == NodeKind::Sum) return make_product({Expr(c), rest});
  return NodeFactory::nary(NodeKind::Product, {Expr(c), rest});
}

}  // namespace

Expr make_sum(std::vector<Expr> terms) {
  Rational constant = 0;
  std::vector<std::pair<Expr, Rational>> parts;
  parts.reserve(terms.size());
  std::function<void(const Expr&)> add = [&](const Expr& t) {
    if (t.kind() == NodeKind::Sum) {
      for (const auto& a : t.args()) add(a);
      return;
    }
    if (t.kind() == NodeKind::Constant) {
      constant += t.value();
      return;
    }
    auto [c, rest] = split_coefficient(t);
    parts.emplace_back(rest, c);
  };
  for (const auto& t : terms) add(t);
  std::stable_sort(parts.begin(), parts.end(),
                   [](const auto& a, const auto& b) { return compare(a.first, b.first) < 0; });
  std::vector<Expr> out;
  if (constant != 0) out.push_back(Expr(constant));
  for (std::size_t i = 0; i < parts.size();) {
    Rational c = parts[i].second;
    std::size_t j = i + 1;
    while (j < parts.size() && parts[j].first == parts[i].first) c += parts[j++].second;
    if (c != 0) out.push_back(scaled(c, parts[i].first));
    i = j;
  }
  if (out.empty()) return Expr(0);
  if (out.size() == 1) return out[0];
  return NodeFactory::nary(NodeKind::Sum, std::move(out));
}

Expr make_product(std::vector<Expr> factors) {
  Rational coef = 1;
  std::vector<std::pair<Expr, Rational>> parts;
  std::vector<Expr> exp_args;
  std::function<void(const Expr&)> add = [&](const Expr& f) {
    switch (f.kind()) {
      case NodeKind::Product:
        for (const auto& a : f.args()) add(a);
        return;
      case NodeKind::Constant:
        coef *= f.value();
        return;
      case NodeKind::Exp:
        exp_args.push_back(f.arg(0));
        return;
      case NodeKind::Power:
        parts.emplace_back(f.arg(0), f.exponent());
        return;
      default:
        parts.emplace_back(f, Rational(1));
    }
  };
  for (const auto& f : factors) add(f);
  if (coef == 0) return Expr(0);

  std::stable_sort(parts.begin(), parts.end(),
                   [](const auto& a, const auto& b) { return compare(a.first, b.first) < 0; });
  std::vector<Expr> merged;
  bool renormalize = false;
  for (std::size_t i = 0; i < parts.size();) {
    Rational q = parts[i].second;
    std::size_t j = i + 1;
    while (j < parts.size() && parts[j].first == parts[i].first) q += parts[j++].second;
    bool combined = j > i + 1;
    i = j;
    if (q == 0) continue;
    const Expr& base = parts[j - 1].first;
    Expr p = combined || q != 1 ? make_power(base, q) : base;
    if (p.kind() == NodeKind::Constant) {
      coef *= p.value();
    } else {
      bool same_base = p.kind() == NodeKind::Power ? p.arg(0) == base : p == base;
      if (!same_base) renormalize = true;
      merged.push_back(p);
    }
  }
  if (coef == 0) return Expr(0);
  if (!exp_args.empty()) {
    Expr e = make_exp(make_sum(exp_args));
    if (e.kind() == NodeKind::Constant) {
      coef *= e.value();
    } else {
      if (e.kind() != NodeKind::Exp) renormalize = true;
      merged.push_back(e);
    }
  }
  if (renormalize) {
    // Merging produced nested structure (e.g. (xy)^(1/2)*(xy)^(1/2)); rerun once flattened.
    std::vector<Expr> again;
    again.push_back(Expr(coef));
    for (const auto& m : merged) again.push_back(m);
    return make_product(std::move(again));
  }
  std::sort(merged.begin(), merged.end(), ExprLess{});
  if (merged.empty()) return Expr(coef);
  if (merged.size() == 1) {
    if (coef == 1) return merged[0];
    if (merged[0].kind() == NodeKind::Sum) {
      // Numeric factors distribute over a lone sum so that like terms can cancel.
      std::vector<Expr> terms;
      for (const auto& t : merged[0].args()) {
        auto [c, rest] = split_coefficient(t);
        terms.push_back(scaled(c * coef, rest));
      }
      return make_sum(std::move(terms));
    }
  }
  std::vector<Expr> out;
  out.reserve(merged.size() + 1);
  if (coef != 1) out.push_back(Expr(coef));
  for (auto& m : merged) out.push_back(std::move(m));
  return NodeFactory::nary(NodeKind::Product, std::move(out));
}

Expr make_power(const Expr& base, const Rational& q) {
  if (q == 0) return Expr(1);
  if (q == 1) return base;
  switch (base.kind()) {
    case NodeKind::Constant: {
      const Rational& c = base.value();
      if (c == 0) {
        if (q < 0) throw std::domain_error("division by zero: 0^(" + to_string(q) + ")");
        return Expr(0);
      }
      if (c == 1) return Expr(1);
      if (is_integer(q)) {
        Integer n = numerator(q);
        if (boost::multiprecision::abs(n) > 4096) break;
        return Expr(rational_pow(c, n.convert_to<long long>()));
      }
      if (c > 0) {
        unsigned den = denominator(q).convert_to<unsigned>();
        auto rn = exact_root(numerator(c), den);
        auto rd = exact_root(denominator(c), den);
        if (rn && rd) {
          Rational root(*rn, *rd);
          Integer p = numerator(q);
          if (boost::multiprecision::abs(p) <= 4096) return Expr(rational_pow(root, p.convert_to<long long>()));
        }
      }
      break;
    }
    case NodeKind::Power:
      if (is_integer(q)) return make_power(base.arg(0), base.exponent() * q);
      break;
    case NodeKind::Exp:
      return make_exp(make_product({Expr(q), base.arg(0)}));
    case NodeKind::Product: {
      if (is_integer(q)) {
        std::vector<Expr> f;
        for (const auto& a : base.args()) f.push_back(make_power(a, q));
        return make_product(std::move(f));
      }
      auto [c, rest] = split_coefficient(base);
      if (c > 0 && c != 1) return make_product({make_power(Expr(c), q), make_power(rest, q)});
      break;
    }
    default:
      break;
  }
  return NodeFactory::power(base, q);
}

Expr make_exp(const Expr& arg) {
  if (arg.is_zero()) return Expr(1);
  if (arg.kind() == NodeKind::Log) return arg.arg(0);
  return NodeFactory::unary(NodeKind::Exp, arg);
}

Expr make_log(const Expr& arg) {
  if (arg.is_one()) return Expr(0);
  if (arg.kind() == NodeKind::Exp) return arg.arg(0);
  if (arg.kind() == NodeKind::Constant && arg.value() <= 0)
    throw std::domain_error("ln of non-positive constant " + to_string(arg.value()));
  return NodeFactory::unary(NodeKind::Log, arg);
}

Expr operator+(const Expr& a, const Expr& b) { return make_sum({a, b}); }
Expr operator-(const Expr& a, const Expr& b) { return make_sum({a, make_product({Expr(-1), b})}); }
Expr operator*(const Expr& a, const Expr& b) { return make_product({a, b}); }
Expr operator/(const Expr& a, const Expr& b) {
  if (b.is_zero()) throw std::domain_error("division by zero");
  return make_product({a, make_power(b, Rational(-1))});
}
Expr operator-(const Expr& a) { return make_product({Expr(-1), a}); }
Expr& operator+=(Expr& a, const Expr& b) { return a = a + b; }
Expr& operator-=(Expr& a, const Expr& b) { return a = a - b; }
Expr& operator*=(Expr& a, const Expr& b) { return a = a * b; }

Expr pow(const Expr& base, const Rational& q) { return make_power(base, q); }
Expr pow(const Expr& base, int n) { return make_power(base, Rational(n)); }
Expr sqrt(const Expr& e) { return make_power(e, Rational(1, 2)); }
Expr exp(const Expr& e) { return make_exp(e); }
Expr log(const Expr& e) { return make_log(e); }

std::vector<Expr> summands(const Expr& e) {
  if (e.kind() == NodeKind::Sum) return e.args();
  return {e};
}

namespace {
template <class Fn>
void visit_dag(const Expr& e, Fn&& fn) {
  std::unordered_set<const Node*> seen;
  std::vector<Expr> stack{e};
  while (!stack.empty()) {
    Expr cur = stack.back();
    stack.pop_back();
    if (!seen.insert(cur.get()).second) continue;
    fn(cur);
    for (const auto& a : cur.args()) stack.push_back(a);
  }
}
}  // namespace

std::set<std::string> free_variables(const Expr& e) {
  std::set<std::string> out;
  visit_dag(e, [&](const Expr& n) {
    if (n.kind() == NodeKind::Variable) out.insert(n.name());
  });
  return out;
}

std::set<std::string> function_symbols(const Expr& e) {
  std::set<std::string> out;
  visit_dag(e, [&](const Expr& n) {
    if (n.kind() == NodeKind::Function) out.insert(n.name());
  });
  return out;
}

std::size_t node_count(const Expr& e) {
  std::unordered_set<Expr, ExprHash> distinct;
  visit_dag(e, [&](const Expr& n) { distinct.insert(n); });
  return distinct.size();
}

bool depends_on(const Expr& e, const std::string& var) {
  if ((e.symbol_mask() & name_bit(var)) == 0) return false;
  return free_variables(e).count(var) > 0;
}

}  // namespace heavenly
