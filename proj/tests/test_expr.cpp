#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "srmc/expr.hpp"

using namespace srmc;

namespace {

double val(const char* src, const VarMap& at) { return eval_value(*parse(src), at); }

Dual dual(const char* src, const VarMap& at) { return eval(*parse(src), at); }

}  // namespace

TEST_CASE("literals and precedence") {
  VarMap at = VarMap::xyt(0, 0, 0);
  CHECK(val("2 + 3*4", at) == 14.0);
  CHECK(val("(2 + 3)*4", at) == 20.0);
  CHECK(val("2 - 3 - 4", at) == -5.0);
  CHECK(val("6/4/2", at) == 0.75);
  CHECK(val("2*3^2", at) == 18.0);
  CHECK(val("2^3^2", at) == 512.0);  // right associative
  CHECK(val("-2^2", at) == -4.0);    // negation binds looser than ^
  CHECK(val("1.5e2 + .25", at) == 150.25);
}

TEST_CASE("variables and partial derivatives") {
  VarMap at = VarMap::xyt(0.7, -0.3, 1.2);
  Dual d = dual("x^3 + sin(2*x)*t + y*y", at);
  CHECK(d.v == doctest::Approx(0.343 + std::sin(1.4) * 1.2 + 0.09).epsilon(1e-15));
  CHECK(d.dx() == doctest::Approx(3 * 0.49 + 2 * std::cos(1.4) * 1.2).epsilon(1e-15));
  CHECK(d.dy() == doctest::Approx(-0.6).epsilon(1e-15));
  CHECK(d.dt() == doctest::Approx(std::sin(1.4)).epsilon(1e-15));
  CHECK(d.ds() == 0.0);

  Dual s = dual("s*s - 2*s", VarMap::s(3.0));
  CHECK(s.v == 3.0);
  CHECK(s.ds() == 4.0);
}

TEST_CASE("function values and derivatives") {
  VarMap at = VarMap::xyt(0.4, 0, 0);
  CHECK(val("exp(x)", at) == doctest::Approx(std::exp(0.4)).epsilon(1e-16));
  CHECK(val("log(x)", at) == doctest::Approx(std::log(0.4)).epsilon(1e-15));
  CHECK(val("sqrt(x)", at) == doctest::Approx(std::sqrt(0.4)).epsilon(1e-16));
  CHECK(val("tanh(x)", at) == doctest::Approx(std::tanh(0.4)).epsilon(1e-15));
  CHECK(dual("exp(2*x)", at).dx() == doctest::Approx(2 * std::exp(0.8)).epsilon(1e-15));
  CHECK(dual("log(x)", at).dx() == doctest::Approx(2.5).epsilon(1e-15));
  CHECK(dual("sqrt(x)", at).dx() == doctest::Approx(0.5 / std::sqrt(0.4)).epsilon(1e-15));
  CHECK(dual("tanh(x)", at).dx() ==
        doctest::Approx(1.0 - std::tanh(0.4) * std::tanh(0.4)).epsilon(1e-14));
  CHECK(dual("abs(x - 1)", at).dx() == -1.0);
  CHECK(dual("abs(x)", at).dx() == 1.0);
}

TEST_CASE("print is canonical and reparses to the same tree") {
  for (const char* src : {"x + y*t - 2", "-(x^2) + sin(t)/3", "abs(x - 0.5)*tanh(s)",
                          "1/(1 + exp(-2*x))", "x^(y + 1)"}) {
    ExprPtr e = parse(src);
    std::string printed = print(*e);
    ExprPtr again = parse(printed);
    CHECK(structurally_equal(*e, *again));
    CHECK(print(*again) == printed);
  }
}

TEST_CASE("parse errors carry a byte offset") {
  CHECK_THROWS_AS(parse("x +"), ParseError);
  CHECK_THROWS_AS(parse("(x"), ParseError);
  CHECK_THROWS_AS(parse("x ~ y"), ParseError);
  CHECK_THROWS_AS(parse("foo(x)"), ParseError);
  try {
    parse("x + * y");
    CHECK(false);
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("byte") != std::string::npos);
  }
}

TEST_CASE("evaluation guards domain errors") {
  CHECK_THROWS_AS(val("log(x)", VarMap::xyt(-1, 0, 0)), NumericalError);
  CHECK_THROWS_AS(val("sqrt(x)", VarMap::xyt(-2, 0, 0)), NumericalError);
  CHECK_THROWS_AS(val("1/x", VarMap::xyt(0, 0, 0)), NumericalError);
  CHECK_THROWS_AS(val("x^0.5", VarMap::xyt(-1, 0, 0)), NumericalError);
  CHECK_THROWS_AS(val("y", VarMap::xt(0, 0)), ValidationError);  // y unbound
}

TEST_CASE("scalar fields reject variables outside their subset") {
  CHECK_THROWS_AS(ScalarField::parse_field("x + y", {Var::X}), ValidationError);
  ScalarField f = ScalarField::parse_field("x*t", {Var::X, Var::T});
  CHECK(f.eval(VarMap::xt(2, 3)) == 6.0);
  CHECK_FALSE(f.is_constant());

  ScalarField c = ScalarField::constant(2.5);
  CHECK(c.is_constant());
  CHECK(c.eval(VarMap{}) == 2.5);

  Dual g = ScalarField::parse_field("x*x - t", {Var::X, Var::T}).eval_grad(VarMap::xt(3, 1));
  CHECK(g.v == 8.0);
  CHECK(g.dx() == 6.0);
  CHECK(g.dt() == -1.0);
}
