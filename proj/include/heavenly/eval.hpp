#pragma once

#include "heavenly/expr.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace heavenly {

using Point = std::map<std::string, double>;
using ExactPoint = std::map<std::string, Rational>;

// Numeric domain violation (negative sqrt argument, ln of a non-positive
// value, division by zero). Carries the text of the offending subexpression.
class DomainError : public std::runtime_error {
 public:
  DomainError(const std::string& what, const std::string& subexpression);
  const std::string& subexpression() const { return subexpression_; }

 private:
  std::string subexpression_;
};

class UnboundSymbol : public std::runtime_error {
 public:
  explicit UnboundSymbol(const std::string& symbol);
  const std::string& symbol() const { return symbol_; }

 private:
  std::string symbol_;
};

// Straight-line program compiled from a batch of expressions. Common
// subexpressions are evaluated once. Safe to share between threads as long
// as each caller supplies its own scratch buffer.
class Program {
 public:
  Program() = default;
  Program(const std::vector<Expr>& outputs, const std::vector<std::string>& inputs, const Bindings& bindings = {});

  const std::vector<std::string>& inputs() const { return inputs_; }
  std::size_t output_count() const { return outputs_.size(); }
  std::size_t instruction_count() const { return code_.size(); }

  void run(const double* in, double* out, std::vector<double>& scratch) const;
  std::vector<double> run(const std::vector<double>& in) const;
  std::vector<double> run(const Point& p) const;

 private:
  enum class Op : std::uint8_t { Const, Input, Add, Mul, PowInt, Sqrt, PowRat, Exp, Log };
  struct Instr {
    Op op;
    int a = -1;        // single operand register or input slot
    int start = 0;     // operand list for Add/Mul
    int count = 0;
    int ip = 0;        // integer power / rational numerator
    int iq = 1;        // rational denominator
    double c = 0.0;
  };

  int emit(const Expr& e, std::map<std::string, int>& slots, void* memo);
  [[noreturn]] void fail(std::size_t instr, const std::string& what) const;

  std::vector<std::string> inputs_;
  std::vector<Instr> code_;
  std::vector<int> operands_;
  std::vector<int> outputs_;
  std::vector<Expr> sources_;
};

double eval(const Expr& e, const Point& p, const Bindings& bindings = {});

// Exact value when e is rational at the given rational inputs (exact roots
// included); nullopt when an irrational node is reached.
std::optional<Rational> eval_exact(const Expr& e, const ExactPoint& p, const Bindings& bindings = {});

// Central difference (e(p+h) - e(p-h)) / (2h) along var.
double fd_oracle(const Expr& e, const std::string& var, const Point& p, double h, const Bindings& bindings = {});

}  // namespace heavenly
