#pragma once

#include "heavenly/expr.hpp"

namespace heavenly {

struct Node {
  NodeKind kind = NodeKind::Constant;
  std::size_t hash = 0;
  std::uint64_t mask = 0;  // bloom filter over variable names
  Rational value;          // constant value or power exponent
  std::string name;
  int order = 0;
  std::vector<Expr> args;
};

struct NodeFactory {
  static Expr constant(const Rational& v);
  static Expr variable(const std::string& name);
  static Expr function(const std::string& name, int order, const Expr& arg);
  static Expr power(const Expr& base, const Rational& q);
  static Expr unary(NodeKind kind, const Expr& arg);
  static Expr nary(NodeKind kind, std::vector<Expr> args);
};

std::uint64_t name_bit(const std::string& name);

}  // namespace heavenly
