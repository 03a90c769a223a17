#include <cmath>
#include <random>
#include <string>

#include "doctest.h"
#include "semiflow/errors.hpp"
#include "semiflow/expression.hpp"
#include "semiflow/rng.hpp"

using namespace semiflow;

namespace {

double eval_xats(const Expression& e, double x, double u = 0.0, double t = 0.0, double s = 0.0) {
  EvalEnv env;
  env.x = x;
  env.u = u;
  env.t = t;
  env.s = s;
  return e.eval(env);
}

}  // namespace

TEST_CASE("arithmetic and precedence") {
  CHECK(eval_xats(parse_expression("2 + 3 * 4"), 0.0) == 14.0);
  CHECK(eval_xats(parse_expression("(2 + 3) * 4"), 0.0) == 20.0);
  CHECK(eval_xats(parse_expression("2^3^2"), 0.0) == 512.0);  // right associative
  CHECK(eval_xats(parse_expression("-2^2"), 0.0) == -4.0);    // ^ binds over unary minus
  CHECK(eval_xats(parse_expression("0.5*sin(pi/2) - 0.3125"), 0.0) == doctest::Approx(0.1875));
  CHECK(eval_xats(parse_expression("7 - 2 - 1"), 0.0) == 4.0);  // left associative
  CHECK(eval_xats(parse_expression("12 / 4 / 3"), 0.0) == 1.0);
  CHECK(eval_xats(parse_expression("--3"), 0.0) == 3.0);
}

TEST_CASE("functions and constants") {
  CHECK(eval_xats(parse_expression("max(2, 3)"), 0.0) == 3.0);
  CHECK(eval_xats(parse_expression("min(2, -3)"), 0.0) == -3.0);
  CHECK(eval_xats(parse_expression("sign(-7)"), 0.0) == -1.0);
  CHECK(eval_xats(parse_expression("sign(0)"), 0.0) == 0.0);
  CHECK(eval_xats(parse_expression("abs(-2.5)"), 0.0) == 2.5);
  CHECK(eval_xats(parse_expression("sqrt(16)"), 0.0) == 4.0);
  CHECK(eval_xats(parse_expression("ln(exp(2))"), 0.0) == doctest::Approx(2.0));
  CHECK(eval_xats(parse_expression("cos(0)"), 0.0) == 1.0);
  CHECK(eval_xats(parse_expression("e"), 0.0) == doctest::Approx(std::exp(1.0)));
  CHECK(eval_xats(parse_expression("pi"), 0.0) == doctest::Approx(std::acos(-1.0)));

  // Constants fold to literals, so the printed form has no names left.
  CHECK(parse_expression("pi").print().find("pi") == std::string::npos);
}

TEST_CASE("variables and the reference set") {
  Expression f = parse_expression("x*u + t - s");
  CHECK(eval_xats(f, 2.0, 3.0, 1.0, 0.5) == 6.5);
  VarSet refs = f.references();
  CHECK(refs.x);
  CHECK(refs.u);
  CHECK(refs.t);
  CHECK(refs.s);

  VarSet only_xu;
  only_xu.x = only_xu.u = true;
  CHECK(parse_expression("x - u").references().subset_of(only_xu));
  CHECK(!parse_expression("x - t").references().subset_of(only_xu));
  CHECK(parse_expression("1 + 2").references() == VarSet{});

  // Evaluating with a missing slot is an error, not a silent zero.
  EvalEnv env;
  env.x = 1.0;
  CHECK_THROWS_AS(parse_expression("x + u").eval(env), EvalError);
}

TEST_CASE("domain errors carry byte offsets") {
  EvalEnv env;
  CHECK_THROWS_AS(parse_expression("ln(0 - 1)").eval(env), EvalError);
  CHECK_THROWS_AS(parse_expression("sqrt(0 - 4)").eval(env), EvalError);
  CHECK_THROWS_WITH_AS(parse_expression("ln(0)").eval(env),
                       "ln of a nonpositive value at byte 0", EvalError);
}

TEST_CASE("parse errors point at the offending byte") {
  CHECK_THROWS_AS(parse_expression(""), ParseError);
  CHECK_THROWS_AS(parse_expression("2 +"), ParseError);
  CHECK_THROWS_AS(parse_expression("sin(x"), ParseError);
  CHECK_THROWS_AS(parse_expression("foo(2)"), ParseError);
  CHECK_THROWS_AS(parse_expression("2 2"), ParseError);
  CHECK_THROWS_AS(parse_expression("min(1)"), ParseError);

  try {
    parse_expression("2 + * 3");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.offset == 4);
    CHECK(!e.expected.empty());
    CHECK(std::string(e.what()).find("byte 4") != std::string::npos);
  }
}

TEST_CASE("print parses back to the same tree") {
  for (const char* text :
       {"2 + 3 * 4", "-x^2 + u", "min(x, max(u, t))", "sin(pi*x) * exp(0 - t)",
        "x/u/t", "abs(s - 0.5) + sign(x)", "1.5e-3 * x", "-(x + u)", "2^x^u",
        "sqrt(abs(x)) + ln(2 + u*u)"}) {
    Expression a = parse_expression(text);
    Expression b = parse_expression(a.print());
    CHECK(a == b);
    CHECK(a.print() == b.print());
  }
}

TEST_CASE("random expressions survive a print round trip") {
  std::mt19937_64 rng = make_rng(2024);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  // Random expression text over the full grammar, depth-limited.
  std::function<std::string(int)> gen = [&](int depth) -> std::string {
    const double r = unif(rng);
    if (depth <= 0 || r < 0.3) {
      switch (static_cast<int>(unif(rng) * 6.0)) {
        case 0: return "x";
        case 1: return "u";
        case 2: return "t";
        case 3: return "s";
        case 4: return std::to_string(1 + static_cast<int>(unif(rng) * 9.0));
        default: return "0." + std::to_string(1 + static_cast<int>(unif(rng) * 89.0));
      }
    }
    if (r < 0.75) {
      const char* ops[] = {"+", "-", "*", "/", "^"};
      const char* op = ops[static_cast<int>(unif(rng) * 4.999)];
      return "(" + gen(depth - 1) + " " + op + " " + gen(depth - 1) + ")";
    }
    if (r < 0.85) return "-" + gen(depth - 1);
    if (r < 0.95) {
      const char* fns[] = {"sin", "cos", "exp", "abs", "sign"};
      return std::string(fns[static_cast<int>(unif(rng) * 4.999)]) + "(" + gen(depth - 1) + ")";
    }
    return (unif(rng) < 0.5 ? std::string("min(") : std::string("max(")) + gen(depth - 1) + ", " +
           gen(depth - 1) + ")";
  };

  for (int trial = 0; trial < 1000; ++trial) {
    const std::string text = gen(4);
    Expression a = parse_expression(text);
    Expression b = parse_expression(a.print());
    REQUIRE(a == b);

    EvalEnv env;
    env.x = unif(rng) * 2.0 - 1.0;
    env.u = unif(rng) * 2.0 - 1.0;
    env.t = unif(rng);
    env.s = unif(rng);
    const double va = a.eval(env);
    const double vb = b.eval(env);
    if (std::isfinite(va) || std::isfinite(vb)) {
      REQUIRE(((std::isnan(va) && std::isnan(vb)) || va == vb));
    }
  }
}
