#include "heavenly/expr.hpp"

#include <cctype>

namespace heavenly {

ParseError::ParseError(const std::string& message, std::size_t offset)
    : std::runtime_error("parse error at byte " + std::to_string(offset) + ": " + message),
      detail_(message),
      offset_(offset) {}

namespace {

// Grammar:
//   expr    := term (('+' | '-') term)*
//   term    := signed (('*' | '/') signed)*
//   signed  := ('+' | '-')* power
//   power   := primary ('^' signed)?            right associative
//   primary := number | name | name '\''* '(' expr ')' | '(' expr ')'
// Built-ins: exp, ln, log (alias of ln), sqrt. Any other called name is an
// opaque unary symbol whose primes count derivatives.
class Parser {
 public:
  explicit Parser(const std::string& text) : s_(text) {}

  Expr run() {
    skip();
    if (pos_ >= s_.size()) throw ParseError("empty expression", pos_);
    Expr e = expr();
    skip();
    if (pos_ < s_.size()) throw ParseError(std::string("unexpected character '") + s_[pos_] + "'", pos_);
    return e;
  }

 private:
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    skip();
    if (pos_ >= s_.size()) throw ParseError(std::string("expected '") + c + "' but reached end of input", pos_);
    if (s_[pos_] != c) throw ParseError(std::string("expected '") + c + "'", pos_);
    ++pos_;
  }

  Expr expr() {
    std::vector<Expr> terms;
    terms.push_back(term());
    for (;;) {
      if (accept('+')) {
        terms.push_back(term());
      } else if (accept('-')) {
        terms.push_back(make_product({Expr(-1), term()}));
      } else {
        break;
      }
    }
    return make_sum(std::move(terms));
  }

  Expr term() {
    std::vector<Expr> factors;
    signed_factor(factors);
    for (;;) {
      if (accept('*')) {
        signed_factor(factors);
      } else if (accept('/')) {
        skip();
        std::size_t at = pos_;
        std::vector<Expr> den;
        signed_factor(den);
        Expr d = make_product(std::move(den));
        if (d.is_zero()) throw ParseError("division by zero", at);
        factors.push_back(make_power(d, Rational(-1)));
      } else {
        break;
      }
    }
    return make_product(std::move(factors));
  }

  // Leading signs become a separate -1 factor so that "-(a+b)*c" keeps the
  // sum intact, matching how such products print.
  void signed_factor(std::vector<Expr>& out) {
    bool negative = false;
    for (;;) {
      if (accept('-'))
        negative = !negative;
      else if (!accept('+'))
        break;
    }
    if (negative) out.push_back(Expr(-1));
    out.push_back(power());
  }

  Expr power() {
    Expr base = primary();
    skip();
    if (!accept('^')) return base;
    skip();
    std::size_t at = pos_;
    std::vector<Expr> ex;
    signed_factor(ex);
    Expr q = make_product(std::move(ex));
    if (!q.is_constant()) throw ParseError("exponent must be a rational constant", at);
    try {
      return make_power(base, q.value());
    } catch (const std::domain_error& err) {
      throw ParseError(err.what(), at);
    }
  }

  Expr primary() {
    skip();
    if (pos_ >= s_.size()) throw ParseError("unexpected end of input", pos_);
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return name();
    throw ParseError(std::string("unexpected character '") + c + "'", pos_);
  }

  Expr number() {
    std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      std::size_t save = pos_++;
      if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
      if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      } else {
        pos_ = save;  // "2e" followed by a name: let the caller report it
      }
    }
    try {
      return Expr(parse_rational(s_.substr(start, pos_ - start)));
    } catch (const std::invalid_argument& err) {
      throw ParseError(err.what(), start);
    }
  }

  Expr name() {
    std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    std::string id = s_.substr(start, pos_ - start);
    int primes = 0;
    while (pos_ < s_.size() && s_[pos_] == '\'') {
      ++primes;
      ++pos_;
    }
    skip();
    bool call = pos_ < s_.size() && s_[pos_] == '(';
    if (!call) {
      if (primes > 0) throw ParseError("derivative marks require a call such as " + id + "'(z)", start);
      if (id == "exp" || id == "ln" || id == "log" || id == "sqrt")
        throw ParseError("built-in '" + id + "' takes exactly one argument", start);
      return Expr::variable(id);
    }
    ++pos_;
    Expr a = expr();
    skip();
    if (pos_ < s_.size() && s_[pos_] == ',')
      throw ParseError("'" + id + "' takes exactly one argument", pos_);
    expect(')');
    bool builtin = id == "exp" || id == "ln" || id == "log" || id == "sqrt";
    if (builtin && primes > 0) throw ParseError("derivative marks are not allowed on built-in '" + id + "'", start);
    try {
      if (id == "exp") return make_exp(a);
      if (id == "ln" || id == "log") return make_log(a);
      if (id == "sqrt") return make_power(a, Rational(1, 2));
    } catch (const std::domain_error& err) {
      throw ParseError(err.what(), start);
    }
    return Expr::function(id, primes, a);
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse(const std::string& text) { return Parser(text).run(); }

UnaryFunction parse_unary_function(const std::string& text) {
  Expr body = parse(text);
  auto vars = free_variables(body);
  if (vars.size() > 1) throw ParseError("a unary function must mention at most one variable: '" + text + "'", 0);
  if (!function_symbols(body).empty())
    throw ParseError("a unary function definition cannot contain opaque symbols: '" + text + "'", 0);
  UnaryFunction f;
  f.var = vars.empty() ? std::string("t") : *vars.begin();
  f.body = body;
  return f;
}

}  // namespace heavenly
