#include "expr_node.hpp"

#include <unordered_map>

namespace heavenly {

namespace {

using Memo = std::unordered_map<const Node*, Expr>;

// Rebuilds e with children mapped through fn; keeps the node when nothing changed.
template <class Fn>
Expr rebuild(const Expr& e, Fn&& fn) {
  switch (e.kind()) {
    case NodeKind::Constant:
    case NodeKind::Variable:
      return e;
    case NodeKind::Function: {
      Expr a = fn(e.arg(0));
      return a.get() == e.arg(0).get() ? e : Expr::function(e.name(), e.order(), a);
    }
    case NodeKind::Power: {
      Expr a = fn(e.arg(0));
      return a.get() == e.arg(0).get() ? e : make_power(a, e.exponent());
    }
    case NodeKind::Exp: {
      Expr a = fn(e.arg(0));
      return a.get() == e.arg(0).get() ? e : make_exp(a);
    }
    case NodeKind::Log: {
      Expr a = fn(e.arg(0));
      return a.get() == e.arg(0).get() ? e : make_log(a);
    }
    case NodeKind::Product:
    case NodeKind::Sum: {
      std::vector<Expr> out;
      out.reserve(e.size());
      bool changed = false;
      for (const auto& a : e.args()) {
        out.push_back(fn(a));
        changed = changed || out.back().get() != a.get();
      }
      if (!changed) return e;
      return e.kind() == NodeKind::Sum ? make_sum(std::move(out)) : make_product(std::move(out));
    }
  }
  return e;
}

class Differentiator {
 public:
  explicit Differentiator(const std::string& var) : var_(var), bit_(name_bit(var)) {}

  Expr operator()(const Expr& e) {
    if ((e.symbol_mask() & bit_) == 0) return Expr(0);
    auto it = memo_.find(e.get());
    if (it != memo_.end()) return it->second;
    Expr d = compute(e);
    memo_.emplace(e.get(), d);
    keep_.push_back(e);
    return d;
  }

 private:
  Expr compute(const Expr& e) {
    switch (e.kind()) {
      case NodeKind::Constant:
        return Expr(0);
      case NodeKind::Variable:
        return Expr(e.name() == var_ ? 1 : 0);
      case NodeKind::Function: {
        Expr inner = (*this)(e.arg(0));
        if (inner.is_zero()) return Expr(0);
        return make_product({Expr::function(e.name(), e.order() + 1, e.arg(0)), inner});
      }
      case NodeKind::Power: {
        Expr inner = (*this)(e.arg(0));
        if (inner.is_zero()) return Expr(0);
        const Rational& q = e.exponent();
        return make_product({Expr(q), make_power(e.arg(0), q - 1), inner});
      }
      case NodeKind::Exp: {
        Expr inner = (*this)(e.arg(0));
        if (inner.is_zero()) return Expr(0);
        return make_product({e, inner});
      }
      case NodeKind::Log: {
        Expr inner = (*this)(e.arg(0));
        if (inner.is_zero()) return Expr(0);
        return make_product({inner, make_power(e.arg(0), Rational(-1))});
      }
      case NodeKind::Sum: {
        std::vector<Expr> terms;
        for (const auto& a : e.args()) {
          Expr d = (*this)(a);
          if (!d.is_zero()) terms.push_back(d);
        }
        return make_sum(std::move(terms));
      }
      case NodeKind::Product: {
        const auto& f = e.args();
        std::vector<Expr> terms;
        for (std::size_t i = 0; i < f.size(); ++i) {
          Expr d = (*this)(f[i]);
          if (d.is_zero()) continue;
          std::vector<Expr> prod;
          prod.reserve(f.size());
          for (std::size_t j = 0; j < f.size(); ++j) prod.push_back(j == i ? d : f[j]);
          terms.push_back(make_product(std::move(prod)));
        }
        return make_sum(std::move(terms));
      }
    }
    return Expr(0);
  }

  std::string var_;
  std::uint64_t bit_;
  Memo memo_;
  std::vector<Expr> keep_;  // keeps memo keys alive
};

class Substituter {
 public:
  explicit Substituter(const std::map<std::string, Expr>& r) : r_(r) {
    for (const auto& [name, _] : r) mask_ |= name_bit(name);
  }

  Expr operator()(const Expr& e) {
    if ((e.symbol_mask() & mask_) == 0) return e;
    auto it = memo_.find(e.get());
    if (it != memo_.end()) return it->second;
    Expr out;
    if (e.kind() == NodeKind::Variable) {
      auto f = r_.find(e.name());
      out = f == r_.end() ? e : f->second;
    } else {
      out = rebuild(e, *this);
    }
    memo_.emplace(e.get(), out);
    keep_.push_back(e);
    return out;
  }

 private:
  const std::map<std::string, Expr>& r_;
  std::uint64_t mask_ = 0;
  Memo memo_;
  std::vector<Expr> keep_;
};

class Binder {
 public:
  explicit Binder(const Bindings& b) : b_(b) {}

  Expr operator()(const Expr& e) {
    auto it = memo_.find(e.get());
    if (it != memo_.end()) return it->second;
    Expr out;
    if (e.kind() == NodeKind::Function) {
      Expr a = (*this)(e.arg(0));
      auto f = b_.find(e.name());
      out = f == b_.end() ? Expr::function(e.name(), e.order(), a) : f->second.apply(a, e.order());
    } else if (e.args().empty()) {
      out = e;
    } else {
      out = rebuild(e, *this);
    }
    memo_.emplace(e.get(), out);
    keep_.push_back(e);
    return out;
  }

 private:
  const Bindings& b_;
  Memo memo_;
  std::vector<Expr> keep_;
};

}  // namespace

Expr diff(const Expr& e, const std::string& var) { return Differentiator(var)(e); }

Expr diff(const Expr& e, const std::vector<std::string>& vars) {
  Expr out = e;
  for (const auto& v : vars) out = diff(out, v);
  return out;
}

Expr subst(const Expr& e, const std::map<std::string, Expr>& replacements) {
  if (replacements.empty()) return e;
  return Substituter(replacements)(e);
}

Expr subst(const Expr& e, const std::string& var, const Expr& replacement) {
  std::map<std::string, Expr> r{{var, replacement}};
  return subst(e, r);
}

Expr UnaryFunction::apply(const Expr& arg, int order) const {
  Expr body_d = body;
  for (int k = 0; k < order; ++k) body_d = diff(body_d, var);
  return subst(body_d, var, arg);
}

Expr bind_functions(const Expr& e, const Bindings& bindings) {
  if (bindings.empty()) return e;
  return Binder(bindings)(e);
}

}  // namespace heavenly
