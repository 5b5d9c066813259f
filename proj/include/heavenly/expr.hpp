#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace heavenly {

using Rational = boost::multiprecision::cpp_rational;
using Integer = boost::multiprecision::cpp_int;

double to_double(const Rational& r);
std::string to_string(const Rational& r);
// Parses "p", "p/q", "-p/q" or a decimal literal such as "0.25" or "1e-3".
Rational parse_rational(const std::string& text);

enum class NodeKind : std::uint8_t {
  Constant,
  Variable,
  Function,  // opaque unary symbol with a derivative order
  Power,     // base^q with q rational (sqrt and quotients live here)
  Exp,
  Log,
  Product,
  Sum,
};

struct Node;

// Immutable symbolic expression. Construction always goes through the
// canonicalizing helpers below, so two structurally equal values print the
// same way and compare equal.
class Expr {
 public:
  Expr();  // zero
  Expr(int value);
  Expr(long value);
  Expr(long long value);
  Expr(const Rational& value);

  static Expr variable(const std::string& name);
  static Expr function(const std::string& name, int order, const Expr& arg);

  NodeKind kind() const;
  bool is_constant() const { return kind() == NodeKind::Constant; }
  bool is_zero() const;
  bool is_one() const;
  const Rational& value() const;     // Constant
  const Rational& exponent() const;  // Power
  const std::string& name() const;   // Variable, Function
  int order() const;                 // Function
  const std::vector<Expr>& args() const;
  const Expr& arg(std::size_t i) const { return args()[i]; }
  std::size_t size() const { return args().size(); }

  std::size_t hash() const;
  std::uint64_t symbol_mask() const;
  const Node* get() const { return node_.get(); }

  std::string str() const;

  friend bool operator==(const Expr& a, const Expr& b);
  friend bool operator!=(const Expr& a, const Expr& b) { return !(a == b); }

 private:
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;

  friend struct NodeFactory;
};

// Total order used for canonical sorting.
int compare(const Expr& a, const Expr& b);

struct ExprLess {
  bool operator()(const Expr& a, const Expr& b) const { return compare(a, b) < 0; }
};
struct ExprHash {
  std::size_t operator()(const Expr& e) const { return e.hash(); }
};

Expr make_sum(std::vector<Expr> terms);
Expr make_product(std::vector<Expr> factors);
Expr make_power(const Expr& base, const Rational& q);
Expr make_exp(const Expr& arg);
Expr make_log(const Expr& arg);

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr& operator+=(Expr& a, const Expr& b);
Expr& operator-=(Expr& a, const Expr& b);
Expr& operator*=(Expr& a, const Expr& b);

Expr pow(const Expr& base, const Rational& q);
Expr pow(const Expr& base, int n);
Expr sqrt(const Expr& e);
Expr exp(const Expr& e);
Expr log(const Expr& e);

// Splits e into (c, rest) with e == c*rest and rest carrying no numeric factor.
std::pair<Rational, Expr> split_coefficient(const Expr& e);

// Top-level summands (a single-element list for a non-sum).
std::vector<Expr> summands(const Expr& e);

std::set<std::string> free_variables(const Expr& e);
std::set<std::string> function_symbols(const Expr& e);
std::size_t node_count(const Expr& e);  // distinct nodes of the DAG
bool depends_on(const Expr& e, const std::string& var);

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t offset);
  std::size_t offset() const { return offset_; }
  const std::string& detail() const { return detail_; }

 private:
  std::string detail_;
  std::size_t offset_;
};

Expr parse(const std::string& text);

// Concrete definition of an opaque function symbol as body(var).
struct UnaryFunction {
  std::string var = "t";
  Expr body;

  Expr apply(const Expr& arg, int order = 0) const;
};

using Bindings = std::map<std::string, UnaryFunction>;

// Parses "z^2" or "exp(t)" style definitions. The single free variable of
// the text becomes the bound variable; constants are allowed.
UnaryFunction parse_unary_function(const std::string& text);

Expr diff(const Expr& e, const std::string& var);
Expr diff(const Expr& e, const std::vector<std::string>& vars);

// Simultaneous, capture-free substitution of variables.
Expr subst(const Expr& e, const std::map<std::string, Expr>& replacements);
Expr subst(const Expr& e, const std::string& var, const Expr& replacement);

// Replaces opaque function symbols by their definitions (with derivatives).
Expr bind_functions(const Expr& e, const Bindings& bindings);

}  // namespace heavenly
