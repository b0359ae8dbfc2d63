#include "srmc/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <limits>

namespace srmc {

const char* var_name(Var v) {
  switch (v) {
    case Var::X: return "x";
    case Var::Y: return "y";
    case Var::T: return "t";
    case Var::S: return "s";
  }
  return "?";
}

std::optional<Var> var_from_name(std::string_view name) {
  if (name == "x") return Var::X;
  if (name == "y") return Var::Y;
  if (name == "t") return Var::T;
  if (name == "s") return Var::S;
  return std::nullopt;
}

namespace {

std::optional<Func> func_from_name(std::string_view name) {
  if (name == "sin") return Func::Sin;
  if (name == "cos") return Func::Cos;
  if (name == "exp") return Func::Exp;
  if (name == "log") return Func::Log;
  if (name == "sqrt") return Func::Sqrt;
  if (name == "abs") return Func::Abs;
  if (name == "tanh") return Func::Tanh;
  return std::nullopt;
}

const char* func_name(Func f) {
  switch (f) {
    case Func::Sin: return "sin";
    case Func::Cos: return "cos";
    case Func::Exp: return "exp";
    case Func::Log: return "log";
    case Func::Sqrt: return "sqrt";
    case Func::Abs: return "abs";
    case Func::Tanh: return "tanh";
  }
  return "?";
}

struct Token {
  enum class Kind { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };
  Kind kind;
  double number = 0.0;
  std::string ident;
  std::size_t offset = 0;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    Token tok;
    tok.offset = pos_;
    if (pos_ >= src_.size()) {
      tok.kind = Token::Kind::End;
      return tok;
    }
    char c = src_[pos_];
    switch (c) {
      case '+': ++pos_; tok.kind = Token::Kind::Plus; return tok;
      case '-': ++pos_; tok.kind = Token::Kind::Minus; return tok;
      case '*': ++pos_; tok.kind = Token::Kind::Star; return tok;
      case '/': ++pos_; tok.kind = Token::Kind::Slash; return tok;
      case '^': ++pos_; tok.kind = Token::Kind::Caret; return tok;
      case '(': ++pos_; tok.kind = Token::Kind::LParen; return tok;
      case ')': ++pos_; tok.kind = Token::Kind::RParen; return tok;
      default: break;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      // from_chars keeps parsing locale independent
      const char* first = src_.data() + pos_;
      const char* last = src_.data() + src_.size();
      double value = 0.0;
      auto res = std::from_chars(first, last, value);
      if (res.ec != std::errc()) throw ParseError("bad numeric literal", pos_);
      pos_ = static_cast<std::size_t>(res.ptr - src_.data());
      tok.kind = Token::Kind::Number;
      tok.number = value;
      return tok;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
        ++pos_;
      tok.kind = Token::Kind::Ident;
      tok.ident = std::string(src_.substr(start, pos_ - start));
      return tok;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", pos_);
  }

 private:
  std::string_view src_;
  std::size_t pos_ = 0;
};

ExprPtr make_literal(double v) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Literal;
  e->literal = v;
  return e;
}

ExprPtr make_var(Var v) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Variable;
  e->var = v;
  return e;
}

ExprPtr make_neg(ExprPtr a) {
  // fold so that integer exponents survive a leading minus, e.g. 2^-3
  if (a->kind == Expr::Kind::Literal) return make_literal(-a->literal);
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Negate;
  e->a = std::move(a);
  return e;
}

ExprPtr make_binary(Op op, ExprPtr a, ExprPtr b) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Binary;
  e->op = op;
  e->a = std::move(a);
  e->b = std::move(b);
  return e;
}

ExprPtr make_call(Func f, ExprPtr a) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Call;
  e->func = f;
  e->a = std::move(a);
  return e;
}

class Parser {
 public:
  explicit Parser(std::string_view src) : lex_(src) { advance(); }

  ExprPtr parse_all() {
    ExprPtr e = parse_expr();
    if (cur_.kind != Token::Kind::End)
      throw ParseError("trailing input after expression", cur_.offset);
    return e;
  }

 private:
  void advance() { cur_ = lex_.next(); }

  ExprPtr parse_expr() {
    ExprPtr lhs = parse_term();
    while (cur_.kind == Token::Kind::Plus || cur_.kind == Token::Kind::Minus) {
      Op op = cur_.kind == Token::Kind::Plus ? Op::Add : Op::Sub;
      advance();
      lhs = make_binary(op, lhs, parse_term());
    }
    return lhs;
  }

  ExprPtr parse_term() {
    ExprPtr lhs = parse_factor();
    while (cur_.kind == Token::Kind::Star || cur_.kind == Token::Kind::Slash) {
      Op op = cur_.kind == Token::Kind::Star ? Op::Mul : Op::Div;
      advance();
      lhs = make_binary(op, lhs, parse_factor());
    }
    return lhs;
  }

  ExprPtr parse_factor() {
    if (cur_.kind == Token::Kind::Plus) {
      advance();
      return parse_factor();
    }
    if (cur_.kind == Token::Kind::Minus) {
      advance();
      return make_neg(parse_factor());
    }
    return parse_power();
  }

  ExprPtr parse_power() {
    ExprPtr base = parse_primary();
    if (cur_.kind == Token::Kind::Caret) {
      advance();
      return make_binary(Op::Pow, base, parse_factor());
    }
    return base;
  }

  ExprPtr parse_primary() {
    switch (cur_.kind) {
      case Token::Kind::Number: {
        double v = cur_.number;
        advance();
        return make_literal(v);
      }
      case Token::Kind::Ident: {
        std::string name = cur_.ident;
        std::size_t off = cur_.offset;
        advance();
        if (cur_.kind == Token::Kind::LParen) {
          auto fn = func_from_name(name);
          if (!fn) throw ParseError("unknown function '" + name + "'", off);
          advance();
          ExprPtr arg = parse_expr();
          expect_rparen();
          return make_call(*fn, arg);
        }
        auto v = var_from_name(name);
        if (!v) throw ParseError("unknown identifier '" + name + "'", off);
        return make_var(*v);
      }
      case Token::Kind::LParen: {
        advance();
        ExprPtr e = parse_expr();
        expect_rparen();
        return e;
      }
      case Token::Kind::End:
        throw ParseError("unexpected end of expression", cur_.offset);
      default:
        throw ParseError("unexpected token", cur_.offset);
    }
  }

  void expect_rparen() {
    if (cur_.kind != Token::Kind::RParen)
      throw ParseError("expected ')'", cur_.offset);
    advance();
  }

  Lexer lex_;
  Token cur_;
};

void check_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw NumericalError(std::string("non-finite value in ") + what);
}

Dual dual_add(const Dual& a, const Dual& b) {
  Dual r;
  r.v = a.v + b.v;
  for (int i = 0; i < kNumVars; ++i) r.d[i] = a.d[i] + b.d[i];
  return r;
}

Dual dual_sub(const Dual& a, const Dual& b) {
  Dual r;
  r.v = a.v - b.v;
  for (int i = 0; i < kNumVars; ++i) r.d[i] = a.d[i] - b.d[i];
  return r;
}

Dual dual_mul(const Dual& a, const Dual& b) {
  Dual r;
  r.v = a.v * b.v;
  for (int i = 0; i < kNumVars; ++i) r.d[i] = a.d[i] * b.v + a.v * b.d[i];
  return r;
}

Dual dual_div(const Dual& a, const Dual& b) {
  if (b.v == 0.0) throw NumericalError("division by zero");
  Dual r;
  r.v = a.v / b.v;
  double inv2 = 1.0 / (b.v * b.v);
  for (int i = 0; i < kNumVars; ++i) r.d[i] = (a.d[i] * b.v - a.v * b.d[i]) * inv2;
  return r;
}

bool is_integral_literal(const Expr& e, long long* out) {
  if (e.kind != Expr::Kind::Literal) return false;
  double v = e.literal;
  if (v != std::floor(v) || std::fabs(v) > 64.0) return false;
  *out = static_cast<long long>(v);
  return true;
}

// Integer powers admit negative bases; anything else goes through exp/log.
Dual dual_pow(const Dual& a, const Dual& b, const Expr& bexpr) {
  long long n = 0;
  if (is_integral_literal(bexpr, &n)) {
    if (a.v == 0.0 && n < 0) throw NumericalError("zero raised to a negative power");
    double v = std::pow(a.v, static_cast<double>(n));
    double dv = (n == 0) ? 0.0 : n * std::pow(a.v, static_cast<double>(n - 1));
    Dual r;
    r.v = v;
    for (int i = 0; i < kNumVars; ++i) r.d[i] = dv * a.d[i];
    return r;
  }
  if (a.v <= 0.0) throw NumericalError("power with non-positive base and non-integer exponent");
  double v = std::pow(a.v, b.v);
  double la = std::log(a.v);
  Dual r;
  r.v = v;
  for (int i = 0; i < kNumVars; ++i) r.d[i] = v * (b.d[i] * la + b.v * a.d[i] / a.v);
  return r;
}

Dual dual_call(Func f, const Dual& a) {
  Dual r;
  double dv = 0.0;
  switch (f) {
    case Func::Sin: r.v = std::sin(a.v); dv = std::cos(a.v); break;
    case Func::Cos: r.v = std::cos(a.v); dv = -std::sin(a.v); break;
    case Func::Exp: r.v = std::exp(a.v); dv = r.v; break;
    case Func::Log:
      if (a.v <= 0.0) throw NumericalError("log of non-positive value");
      r.v = std::log(a.v);
      dv = 1.0 / a.v;
      break;
    case Func::Sqrt:
      if (a.v < 0.0) throw NumericalError("sqrt of negative value");
      r.v = std::sqrt(a.v);
      dv = (a.v == 0.0) ? std::numeric_limits<double>::infinity() : 0.5 / r.v;
      // derivative at 0 only matters if some partial is nonzero there
      break;
    case Func::Abs:
      r.v = std::fabs(a.v);
      dv = (a.v > 0.0) ? 1.0 : (a.v < 0.0 ? -1.0 : 0.0);  // subgradient 0 at the kink
      break;
    case Func::Tanh: {
      r.v = std::tanh(a.v);
      dv = 1.0 - r.v * r.v;
      break;
    }
  }
  for (int i = 0; i < kNumVars; ++i) {
    r.d[i] = (a.d[i] == 0.0) ? 0.0 : dv * a.d[i];
  }
  return r;
}

Dual eval_rec(const Expr& e, const VarMap& at) {
  switch (e.kind) {
    case Expr::Kind::Literal: {
      Dual r;
      r.v = e.literal;
      return r;
    }
    case Expr::Kind::Variable: {
      int i = static_cast<int>(e.var);
      if (!at.bound[i])
        throw ValidationError(std::string("variable '") + var_name(e.var) + "' is not bound");
      Dual r;
      r.v = at.value[i];
      r.d[i] = 1.0;
      return r;
    }
    case Expr::Kind::Negate: {
      Dual a = eval_rec(*e.a, at);
      a.v = -a.v;
      for (int i = 0; i < kNumVars; ++i) a.d[i] = -a.d[i];
      return a;
    }
    case Expr::Kind::Binary: {
      Dual a = eval_rec(*e.a, at);
      Dual b = eval_rec(*e.b, at);
      switch (e.op) {
        case Op::Add: return dual_add(a, b);
        case Op::Sub: return dual_sub(a, b);
        case Op::Mul: return dual_mul(a, b);
        case Op::Div: return dual_div(a, b);
        case Op::Pow: return dual_pow(a, b, *e.b);
      }
      break;
    }
    case Expr::Kind::Call:
      return dual_call(e.func, eval_rec(*e.a, at));
  }
  throw Error("corrupt expression tree");
}

}  // namespace

ExprPtr parse(std::string_view src) {
  Parser p(src);
  return p.parse_all();
}

std::string print(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Literal: {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", e.literal);
      return buf;
    }
    case Expr::Kind::Variable:
      return var_name(e.var);
    case Expr::Kind::Negate:
      return "(-" + print(*e.a) + ")";
    case Expr::Kind::Binary: {
      const char* op = "?";
      switch (e.op) {
        case Op::Add: op = "+"; break;
        case Op::Sub: op = "-"; break;
        case Op::Mul: op = "*"; break;
        case Op::Div: op = "/"; break;
        case Op::Pow: op = "^"; break;
      }
      return "(" + print(*e.a) + op + print(*e.b) + ")";
    }
    case Expr::Kind::Call:
      return std::string(func_name(e.func)) + "(" + print(*e.a) + ")";
  }
  return "?";
}

bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Expr::Kind::Literal:
      return a.literal == b.literal;
    case Expr::Kind::Variable:
      return a.var == b.var;
    case Expr::Kind::Negate:
      return structurally_equal(*a.a, *b.a);
    case Expr::Kind::Binary:
      return a.op == b.op && structurally_equal(*a.a, *b.a) && structurally_equal(*a.b, *b.b);
    case Expr::Kind::Call:
      return a.func == b.func && structurally_equal(*a.a, *b.a);
  }
  return false;
}

void collect_vars(const Expr& e, std::array<bool, kNumVars>& used) {
  switch (e.kind) {
    case Expr::Kind::Literal:
      return;
    case Expr::Kind::Variable:
      used[static_cast<int>(e.var)] = true;
      return;
    case Expr::Kind::Negate:
    case Expr::Kind::Call:
      collect_vars(*e.a, used);
      return;
    case Expr::Kind::Binary:
      collect_vars(*e.a, used);
      collect_vars(*e.b, used);
      return;
  }
}

Dual eval(const Expr& e, const VarMap& at) {
  Dual r = eval_rec(e, at);
  check_finite(r.v, "expression value");
  for (int i = 0; i < kNumVars; ++i) {
    if (at.bound[i]) check_finite(r.d[i], "expression derivative");
  }
  return r;
}

double eval_value(const Expr& e, const VarMap& at) { return eval(e, at).v; }

ScalarField::ScalarField(ExprPtr expr, std::vector<Var> allowed)
    : expr_(std::move(expr)), allowed_(std::move(allowed)) {
  std::array<bool, kNumVars> used{};
  collect_vars(*expr_, used);
  for (int i = 0; i < kNumVars; ++i) {
    if (!used[i]) continue;
    bool ok = false;
    for (Var v : allowed_) ok = ok || static_cast<int>(v) == i;
    if (!ok)
      throw ValidationError(std::string("expression uses variable '") +
                            var_name(static_cast<Var>(i)) + "' outside its domain");
  }
}

ScalarField ScalarField::parse_field(std::string_view src, std::vector<Var> allowed) {
  return ScalarField(parse(src), std::move(allowed));
}

ScalarField ScalarField::constant(double c) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Literal;
  e->literal = c;
  return ScalarField(e, {});
}

double ScalarField::eval(const VarMap& at) const { return eval_grad(at).v; }

Dual ScalarField::eval_grad(const VarMap& at) const {
  VarMap bounded = at;
  // bind exactly the declared variables so stray ones are caught
  for (int i = 0; i < kNumVars; ++i) bounded.bound[i] = false;
  for (Var v : allowed_) {
    int i = static_cast<int>(v);
    bounded.bound[i] = at.bound[i];
    if (!at.bound[i])
      throw ValidationError(std::string("no value supplied for variable '") + var_name(v) + "'");
  }
  return srmc::eval(*expr_, bounded);
}

bool ScalarField::is_constant() const {
  std::array<bool, kNumVars> used{};
  collect_vars(*expr_, used);
  for (bool u : used)
    if (u) return false;
  return true;
}

std::string ScalarField::to_string() const { return print(*expr_); }

}  // namespace srmc
