#pragma once
// Small arithmetic expression language with forward-mode differentiation.
//
// Grammar:
//   expr    := term (('+' | '-') term)*
//   term    := factor (('*' | '/') factor)*
//   factor  := ('+' | '-') factor | power
//   power   := primary ('^' factor)?          right associative
//   primary := number | var | func '(' expr ')' | '(' expr ')'
//
// Variables: x y t s.  Functions: sin cos exp log sqrt abs tanh.
// Literals are locale independent (decimal point, optional exponent).

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "srmc/error.hpp"

namespace srmc {

enum class Var : int { X = 0, Y = 1, T = 2, S = 3 };
inline constexpr int kNumVars = 4;

const char* var_name(Var v);
std::optional<Var> var_from_name(std::string_view name);

// Value of an expression together with its partials w.r.t. (x, y, t, s).
struct Dual {
  double v = 0.0;
  std::array<double, kNumVars> d{0.0, 0.0, 0.0, 0.0};

  double dx() const { return d[0]; }
  double dy() const { return d[1]; }
  double dt() const { return d[2]; }
  double ds() const { return d[3]; }
};

// Point of evaluation.  Unbound variables may not appear in the expression.
struct VarMap {
  std::array<double, kNumVars> value{0.0, 0.0, 0.0, 0.0};
  std::array<bool, kNumVars> bound{false, false, false, false};

  VarMap& set(Var v, double x) {
    value[static_cast<int>(v)] = x;
    bound[static_cast<int>(v)] = true;
    return *this;
  }
  static VarMap xyt(double x, double y, double t) {
    return VarMap{}.set(Var::X, x).set(Var::Y, y).set(Var::T, t);
  }
  static VarMap xt(double x, double t) {
    return VarMap{}.set(Var::X, x).set(Var::T, t);
  }
  static VarMap s(double sv) { return VarMap{}.set(Var::S, sv); }
};

enum class Op { Add, Sub, Mul, Div, Pow };
enum class Func { Sin, Cos, Exp, Log, Sqrt, Abs, Tanh };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Kind { Literal, Variable, Negate, Binary, Call } kind;
  double literal = 0.0;  // Literal
  Var var = Var::X;      // Variable
  Op op = Op::Add;       // Binary
  Func func = Func::Sin; // Call
  ExprPtr a, b;          // operands (Negate and Call use `a` only)
};

ExprPtr parse(std::string_view src);           // throws ParseError
std::string print(const Expr& e);              // canonical, reparseable
bool structurally_equal(const Expr& a, const Expr& b);
void collect_vars(const Expr& e, std::array<bool, kNumVars>& used);

Dual eval(const Expr& e, const VarMap& at);    // throws NumericalError
double eval_value(const Expr& e, const VarMap& at);

// An expression restricted to a declared variable subset.  Construction
// rejects expressions that mention anything outside the subset.
class ScalarField {
 public:
  ScalarField() = default;
  ScalarField(ExprPtr expr, std::vector<Var> allowed);

  static ScalarField parse_field(std::string_view src, std::vector<Var> allowed);
  static ScalarField constant(double c);

  double eval(const VarMap& at) const;
  Dual eval_grad(const VarMap& at) const;

  bool valid() const { return expr_ != nullptr; }
  bool is_constant() const;  // no variables appear in the tree
  const ExprPtr& expr() const { return expr_; }
  const std::vector<Var>& allowed() const { return allowed_; }
  std::string to_string() const;

 private:
  ExprPtr expr_;
  std::vector<Var> allowed_;
};

}  // namespace srmc
