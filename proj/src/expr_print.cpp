#include "expr_node.hpp"

#include <sstream>

namespace heavenly {

namespace {

enum Prec { kSum = 1, kProduct = 2, kPower = 3, kAtom = 4 };

void print(std::ostream& os, const Expr& e, int context);

bool needs_parens_as_base(const Expr& e) {
  switch (e.kind()) {
    case NodeKind::Constant:
      return e.value() < 0 || denominator(e.value()) != 1;
    case NodeKind::Variable:
    case NodeKind::Function:
    case NodeKind::Exp:
    case NodeKind::Log:
      return false;
    case NodeKind::Power:
      return e.exponent() != Rational(1, 2);
    default:
      return true;
  }
}

void print_power(std::ostream& os, const Expr& base, const Rational& q) {
  if (q == Rational(1, 2)) {
    os << "sqrt(";
    print(os, base, 0);
    os << ")";
    return;
  }
  if (needs_parens_as_base(base)) {
    os << "(";
    print(os, base, 0);
    os << ")";
  } else {
    print(os, base, kAtom);
  }
  os << "^";
  if (denominator(q) == 1 && q > 0)
    os << to_string(q);
  else
    os << "(" << to_string(q) << ")";
}

// Factor as it appears in a numerator or denominator list.
void print_factor(std::ostream& os, const Expr& f) {
  if (f.kind() == NodeKind::Sum) {
    os << "(";
    print(os, f, 0);
    os << ")";
  } else {
    print(os, f, kProduct + 1);
  }
}

void print_product(std::ostream& os, const Expr& e, bool negate) {
  auto [coef, rest] = split_coefficient(e);
  if (negate) coef = -coef;
  std::vector<Expr> factors = rest.kind() == NodeKind::Product ? rest.args() : std::vector<Expr>{rest};
  if (rest.is_one()) factors.clear();

  std::vector<std::string> num, den;
  Integer p = numerator(coef), q = denominator(coef);
  bool negative = p < 0;
  if (negative) p = -p;
  if (p != 1) num.push_back(p.str());
  if (q != 1) den.push_back(q.str());
  for (const auto& f : factors) {
    std::ostringstream s;
    if (f.kind() == NodeKind::Power && f.exponent() < 0) {
      Rational pos = -f.exponent();
      if (pos == 1)
        print_factor(s, f.arg(0));
      else
        print_power(s, f.arg(0), pos);
      den.push_back(s.str());
    } else {
      print_factor(s, f);
      num.push_back(s.str());
    }
  }
  if (negative) os << "-";
  if (num.empty()) num.push_back("1");
  for (std::size_t i = 0; i < num.size(); ++i) os << (i ? "*" : "") << num[i];
  if (!den.empty()) {
    os << "/";
    if (den.size() > 1) os << "(";
    for (std::size_t i = 0; i < den.size(); ++i) os << (i ? "*" : "") << den[i];
    if (den.size() > 1) os << ")";
  }
}

bool is_negative_term(const Expr& t) {
  if (t.kind() == NodeKind::Constant) return t.value() < 0;
  if (t.kind() == NodeKind::Product && t.arg(0).kind() == NodeKind::Constant) return t.arg(0).value() < 0;
  return false;
}

void print_term(std::ostream& os, const Expr& t, bool negate) {
  if (t.kind() == NodeKind::Constant) {
    os << to_string(negate ? Rational(-t.value()) : t.value());
  } else if (t.kind() == NodeKind::Product || negate) {
    print_product(os, t, negate);
  } else {
    print(os, t, kSum + 1);
  }
}

void print(std::ostream& os, const Expr& e, int context) {
  switch (e.kind()) {
    case NodeKind::Constant: {
      bool wrap = context > kSum && (e.value() < 0 || (context >= kPower && denominator(e.value()) != 1));
      if (wrap) os << "(";
      os << to_string(e.value());
      if (wrap) os << ")";
      return;
    }
    case NodeKind::Variable:
      os << e.name();
      return;
    case NodeKind::Function:
      os << e.name() << std::string(static_cast<std::size_t>(e.order()), '\'') << "(";
      print(os, e.arg(0), 0);
      os << ")";
      return;
    case NodeKind::Exp:
      os << "exp(";
      print(os, e.arg(0), 0);
      os << ")";
      return;
    case NodeKind::Log:
      os << "ln(";
      print(os, e.arg(0), 0);
      os << ")";
      return;
    case NodeKind::Power: {
      bool wrap = e.exponent() < 0 && context > kSum;
      if (wrap) os << "(";
      if (e.exponent() < 0) {
        print_product(os, e, false);
      } else {
        print_power(os, e.arg(0), e.exponent());
      }
      if (wrap) os << ")";
      return;
    }
    case NodeKind::Product: {
      bool wrap = context > kProduct;
      if (wrap) os << "(";
      print_product(os, e, false);
      if (wrap) os << ")";
      return;
    }
    case NodeKind::Sum: {
      bool wrap = context > kSum;
      if (wrap) os << "(";
      // Non-constant terms first, the constant last.
      std::vector<Expr> terms;
      Expr constant;
      for (const auto& t : e.args()) {
        if (t.kind() == NodeKind::Constant)
          constant = t;
        else
          terms.push_back(t);
      }
      if (!constant.is_zero()) terms.push_back(constant);
      for (std::size_t i = 0; i < terms.size(); ++i) {
        bool neg = is_negative_term(terms[i]);
        if (i == 0) {
          print_term(os, terms[i], false);
        } else {
          os << (neg ? " - " : " + ");
          print_term(os, terms[i], neg);
        }
      }
      if (wrap) os << ")";
      return;
    }
  }
}

}  // namespace

std::string Expr::str() const {
  std::ostringstream os;
  print(os, *this, 0);
  return os.str();
}

}  // namespace heavenly
