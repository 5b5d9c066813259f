#include "heavenly/eval.hpp"

#include <cmath>
#include <unordered_map>

namespace heavenly {

DomainError::DomainError(const std::string& what, const std::string& subexpression)
    : std::runtime_error(what + " in " + subexpression), subexpression_(subexpression) {}

UnboundSymbol::UnboundSymbol(const std::string& symbol)
    : std::runtime_error("unbound symbol '" + symbol + "'"), symbol_(symbol) {}

namespace {
using Memo = std::unordered_map<Expr, int, ExprHash>;

double ipow(double b, long n) {
  bool inv = n < 0;
  unsigned long k = static_cast<unsigned long>(inv ? -n : n);
  double r = 1.0;
  while (k) {
    if (k & 1) r *= b;
    b *= b;
    k >>= 1;
  }
  return inv ? 1.0 / r : r;
}
}  // namespace

Program::Program(const std::vector<Expr>& outputs, const std::vector<std::string>& inputs, const Bindings& bindings)
    : inputs_(inputs) {
  std::map<std::string, int> slots;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    if (!slots.emplace(inputs[i], static_cast<int>(i)).second)
      throw std::invalid_argument("duplicate program input '" + inputs[i] + "'");
  }
  Memo memo;
  for (const auto& e : outputs) {
    Expr bound = bind_functions(e, bindings);
    outputs_.push_back(emit(bound, slots, &memo));
  }
}

int Program::emit(const Expr& e, std::map<std::string, int>& slots, void* memo_ptr) {
  auto& memo = *static_cast<Memo*>(memo_ptr);
  auto it = memo.find(e);
  if (it != memo.end()) return it->second;
  Instr ins;
  switch (e.kind()) {
    case NodeKind::Constant:
      ins.op = Op::Const;
      ins.c = to_double(e.value());
      break;
    case NodeKind::Variable: {
      auto s = slots.find(e.name());
      if (s == slots.end()) throw UnboundSymbol(e.name());
      ins.op = Op::Input;
      ins.a = s->second;
      break;
    }
    case NodeKind::Function:
      throw UnboundSymbol(e.name() + std::string(static_cast<std::size_t>(e.order()), '\''));
    case NodeKind::Power: {
      ins.a = emit(e.arg(0), slots, memo_ptr);
      const Rational& q = e.exponent();
      long long p = numerator(q).convert_to<long long>();
      long long d = denominator(q).convert_to<long long>();
      if (d == 1) {
        ins.op = Op::PowInt;
        ins.ip = static_cast<int>(p);
      } else if (d == 2) {
        ins.op = Op::Sqrt;
        ins.ip = static_cast<int>(p);
      } else {
        ins.op = Op::PowRat;
        ins.ip = static_cast<int>(p);
        ins.iq = static_cast<int>(d);
        ins.c = static_cast<double>(p) / static_cast<double>(d);
      }
      break;
    }
    case NodeKind::Exp:
      ins.op = Op::Exp;
      ins.a = emit(e.arg(0), slots, memo_ptr);
      break;
    case NodeKind::Log:
      ins.op = Op::Log;
      ins.a = emit(e.arg(0), slots, memo_ptr);
      break;
    case NodeKind::Sum:
    case NodeKind::Product: {
      std::vector<int> regs;
      for (const auto& a : e.args()) regs.push_back(emit(a, slots, memo_ptr));
      ins.op = e.kind() == NodeKind::Sum ? Op::Add : Op::Mul;
      ins.start = static_cast<int>(operands_.size());
      ins.count = static_cast<int>(regs.size());
      operands_.insert(operands_.end(), regs.begin(), regs.end());
      break;
    }
  }
  int reg = static_cast<int>(code_.size());
  code_.push_back(ins);
  sources_.push_back(e);
  memo.emplace(e, reg);
  return reg;
}

void Program::fail(std::size_t instr, const std::string& what) const { throw DomainError(what, sources_[instr].str()); }

void Program::run(const double* in, double* out, std::vector<double>& r) const {
  r.resize(code_.size());
  for (std::size_t i = 0; i < code_.size(); ++i) {
    const Instr& ins = code_[i];
    double v = 0.0;
    switch (ins.op) {
      case Op::Const:
        v = ins.c;
        break;
      case Op::Input:
        v = in[ins.a];
        break;
      case Op::Add: {
        const int* o = operands_.data() + ins.start;
        for (int k = 0; k < ins.count; ++k) v += r[o[k]];
        break;
      }
      case Op::Mul: {
        const int* o = operands_.data() + ins.start;
        v = 1.0;
        for (int k = 0; k < ins.count; ++k) v *= r[o[k]];
        break;
      }
      case Op::PowInt: {
        double b = r[ins.a];
        if (b == 0.0 && ins.ip < 0) fail(i, "division by zero");
        v = ipow(b, ins.ip);
        break;
      }
      case Op::Sqrt: {
        double b = r[ins.a];
        if (b < 0.0) fail(i, "square root of negative value " + std::to_string(b));
        if (b == 0.0 && ins.ip < 0) fail(i, "division by zero");
        v = ipow(std::sqrt(b), ins.ip);
        break;
      }
      case Op::PowRat: {
        double b = r[ins.a];
        if (b == 0.0 && ins.ip < 0) fail(i, "division by zero");
        if (b < 0.0) {
          if (ins.iq % 2 == 0) fail(i, "even root of negative value " + std::to_string(b));
          double m = std::pow(-b, ins.c);
          v = (ins.ip % 2 == 0) ? m : -m;
        } else {
          v = std::pow(b, ins.c);
        }
        break;
      }
      case Op::Exp:
        v = std::exp(r[ins.a]);
        break;
      case Op::Log: {
        double b = r[ins.a];
        if (b <= 0.0) fail(i, "ln of non-positive value " + std::to_string(b));
        v = std::log(b);
        break;
      }
    }
    if (!std::isfinite(v)) fail(i, "non-finite value");
    r[i] = v;
  }
  for (std::size_t k = 0; k < outputs_.size(); ++k) out[k] = r[static_cast<std::size_t>(outputs_[k])];
}

std::vector<double> Program::run(const std::vector<double>& in) const {
  if (in.size() != inputs_.size()) throw std::invalid_argument("program input size mismatch");
  std::vector<double> scratch, out(outputs_.size());
  run(in.data(), out.data(), scratch);
  return out;
}

std::vector<double> Program::run(const Point& p) const {
  std::vector<double> in;
  in.reserve(inputs_.size());
  for (const auto& name : inputs_) {
    auto it = p.find(name);
    if (it == p.end()) throw UnboundSymbol(name);
    in.push_back(it->second);
  }
  return run(in);
}

double eval(const Expr& e, const Point& p, const Bindings& bindings) {
  Expr bound = bind_functions(e, bindings);
  auto vars = free_variables(bound);
  std::vector<std::string> names(vars.begin(), vars.end());
  Program prog({bound}, names);
  return prog.run(p)[0];
}

namespace {

class ExactEvaluator {
 public:
  explicit ExactEvaluator(const ExactPoint& p) : p_(p) {}

  std::optional<Rational> operator()(const Expr& e) {
    auto it = memo_.find(e);
    if (it != memo_.end()) return it->second;
    auto v = compute(e);
    memo_.emplace(e, v);
    return v;
  }

 private:
  std::optional<Rational> compute(const Expr& e) {
    switch (e.kind()) {
      case NodeKind::Constant:
        return e.value();
      case NodeKind::Variable: {
        auto it = p_.find(e.name());
        if (it == p_.end()) throw UnboundSymbol(e.name());
        return it->second;
      }
      case NodeKind::Function:
        throw UnboundSymbol(e.name());
      case NodeKind::Sum: {
        Rational s = 0;
        for (const auto& a : e.args()) {
          auto v = (*this)(a);
          if (!v) return std::nullopt;
          s += *v;
        }
        return s;
      }
      case NodeKind::Product: {
        Rational s = 1;
        for (const auto& a : e.args()) {
          auto v = (*this)(a);
          if (!v) return std::nullopt;
          s *= *v;
        }
        return s;
      }
      case NodeKind::Power: {
        auto b = (*this)(e.arg(0));
        if (!b) return std::nullopt;
        if (*b == 0 && e.exponent() < 0) throw DomainError("division by zero", e.str());
        if (*b < 0 && denominator(e.exponent()) % 2 == 0)
          throw DomainError("even root of negative value", e.str());
        Expr folded = make_power(Expr(*b), e.exponent());
        if (folded.is_constant()) return folded.value();
        return std::nullopt;
      }
      case NodeKind::Exp:
        return std::nullopt;
      case NodeKind::Log: {
        auto b = (*this)(e.arg(0));
        if (!b) return std::nullopt;
        if (*b <= 0) throw DomainError("ln of non-positive value", e.str());
        if (*b == 1) return Rational(0);
        return std::nullopt;
      }
    }
    return std::nullopt;
  }

  const ExactPoint& p_;
  std::unordered_map<Expr, std::optional<Rational>, ExprHash> memo_;
};

}  // namespace

std::optional<Rational> eval_exact(const Expr& e, const ExactPoint& p, const Bindings& bindings) {
  return ExactEvaluator(p)(bind_functions(e, bindings));
}

double fd_oracle(const Expr& e, const std::string& var, const Point& p, double h, const Bindings& bindings) {
  if (p.find(var) == p.end()) throw UnboundSymbol(var);
  Expr bound = bind_functions(e, bindings);
  auto vars = free_variables(bound);
  vars.insert(var);
  std::vector<std::string> names(vars.begin(), vars.end());
  Program prog({bound}, names);
  Point lo = p, hi = p;
  lo[var] -= h;
  hi[var] += h;
  return (prog.run(hi)[0] - prog.run(lo)[0]) / (2.0 * h);
}

}  // namespace heavenly
