#include <cmath>
#include <random>

#include <doctest.h>

#include "homapprox/error.hpp"
#include "homapprox/expr.hpp"
#include "homapprox/parser.hpp"
#include "support.hpp"

using namespace homapprox;
using testing_support::q;

namespace {

Expr x(int i) { return Expr::variable(Variable::x(i)); }
Expr t() { return Expr::variable(Variable::t()); }
Expr c(const char* text) { return Expr::constant(q(text)); }

// Random expressions over t, x1..x3 that are smooth near the origin. Arguments
// of sin/cos/exp vanish at the origin and denominators stay away from zero.
class ExprGenerator {
 public:
  explicit ExprGenerator(std::uint64_t seed) : rng_(seed) {}

  Expr any(int depth) {
    if (depth <= 0) return leaf();
    switch (pick(0, 7)) {
      case 0:
        return leaf();
      case 1:
        return Expr::sum({any(depth - 1), any(depth - 1)});
      case 2:
        return Expr::product({any(depth - 1), any(depth - 1)});
      case 3:
        return Expr::power(any(depth - 1), static_cast<unsigned>(pick(0, 3)));
      case 4:
        return Expr::quotient(any(depth - 1), Expr::sum({c("2"), Expr::sin(vanishing(depth - 1))}));
      case 5:
        return Expr::sin(vanishing(depth - 1));
      case 6:
        return Expr::cos(vanishing(depth - 1));
      default:
        return pick(0, 1) ? Expr::exp(vanishing(depth - 1)) : Expr::negation(any(depth - 1));
    }
  }

  Expr vanishing(int depth) {
    Expr v = variable();
    return pick(0, 1) ? Expr::product({v, any(depth)}) : Expr::sum({v, Expr::product({variable(), any(depth)})});
  }

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

 private:
  int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  Expr variable() { return Expr::variable(Variable{pick(0, 3)}); }
  Expr leaf() {
    if (pick(0, 2) == 0) return Expr::constant(Rational(pick(-4, 4)) / pick(1, 3));
    return variable();
  }

  std::mt19937_64 rng_;
};

double eval_with(const Expr& e, int var, double h) {
  double point[4] = {0, 0, 0, 0};
  point[var] = h;
  return evaluate(e, point[0], std::span<const double>(point + 1, 3));
}

}  // namespace

TEST_SUITE("parse_expr") {
  TEST_CASE("sample inputs") {
    CHECK(parse_expr("-cos(x1)", 3) == Expr::negation(Expr::cos(x(1))));
    CHECK(parse_expr("0", 3) == c("0"));
    CHECK(parse_expr("2*x1^2*sin(t)", 3) == Expr::product({c("2"), Expr::power(x(1), 2), Expr::sin(t())}));
  }

  TEST_CASE("numbers are exact") {
    CHECK(parse_expr("0.5", 1) == c("1/2"));
    CHECK(parse_expr("3/4", 1) == c("3/4"));
    CHECK(parse_expr("-2", 1) == c("-2"));
    CHECK_THROWS_AS(parse_expr("1e3", 1), ParseError);
  }

  TEST_CASE("errors carry positions") {
    try {
      parse_expr("x1 + * 2", 2);
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.position() == 5);
    }
    CHECK_THROWS_AS(parse_expr("x3", 2), ParseError);
    CHECK_THROWS_AS(parse_expr("y1", 2), ParseError);
    CHECK_THROWS_AS(parse_expr("2x1", 2), ParseError);
    CHECK_THROWS_AS(parse_expr("x1^-1", 2), ParseError);
    CHECK_THROWS_AS(parse_expr("sin(x1", 2), ParseError);
    CHECK_THROWS_AS(parse_expr("", 2), ParseError);
    CHECK_THROWS_AS(parse_expr("tan(x1)", 2), ParseError);
    CHECK_THROWS_AS(parse_expr("x0", 2), ParseError);
  }

  TEST_CASE("printing then parsing") {
    for (const char* text : {"-cos(x1)", "2*x1^2*sin(t)", "-sin(x1)^2 - 2*t*x1", "x1/(1 + x2)", "exp(-t*x1) - 1",
                             "(x1 + t)^3", "-(x1 + x2)", "1/3*t^2 - 4/5*x2", "cos(sin(x1))*x1"}) {
      CAPTURE(text);
      Expr e = parse_expr(text, 2);
      Expr s = simplify(e);
      CHECK(parse_expr(to_string(s), 2) == s);
      CHECK(simplify(parse_expr(to_string(e), 2)) == s);
    }
  }

  TEST_CASE("round trip on random expressions") {
    ExprGenerator gen(7);
    for (int i = 0; i < 300; ++i) {
      Expr e = gen.any(3);
      Expr s = simplify(e);
      CAPTURE(to_string(e));
      CHECK(parse_expr(to_string(s), 3) == s);
      CHECK(simplify(parse_expr(to_string(e), 3)) == s);
    }
  }
}

TEST_SUITE("differentiate") {
  TEST_CASE("examples") {
    CHECK(differentiate(parse_expr("sin(x1)^2", 1), Variable::x(1)) == simplify(parse_expr("2*sin(x1)*cos(x1)", 1)));
    CHECK(differentiate(parse_expr("t^2", 1), Variable::t()) == simplify(parse_expr("2*t", 1)));
    CHECK(differentiate(parse_expr("-x2", 3), Variable::x(2)) == c("-1"));
    CHECK(differentiate(parse_expr("x1", 2), Variable::x(2)).is_zero());
  }

  TEST_CASE("quotient rule") {
    Expr d = differentiate(parse_expr("x1/(1 + x1)", 1), Variable::x(1));
    CHECK(eval_at_origin(d) == 1);
    for (double p : {0.1, 0.3, -0.2}) {
      double expected = 1 / ((1 + p) * (1 + p));
      CHECK(evaluate(d, 0, std::span<const double>(&p, 1)) == doctest::Approx(expected).epsilon(1e-12));
    }
  }

  TEST_CASE("derivative at the origin matches central differences") {
    ExprGenerator gen(11);
    const double h = 1e-6;
    int checked = 0;
    for (int i = 0; i < 400; ++i) {
      Expr e = gen.any(3);
      for (int var = 0; var <= 3; ++var) {
        Rational exact = eval_at_origin(differentiate(e, Variable{var}));
        double fd = (eval_with(e, var, h) - eval_with(e, var, -h)) / (2 * h);
        double ex = exact.get_d();
        CAPTURE(to_string(e));
        CAPTURE(var);
        CHECK(std::abs(fd - ex) <= 1e-6 * std::max(1.0, std::abs(ex)));
        ++checked;
      }
    }
    CHECK(checked == 1600);
  }
}

TEST_SUITE("eval_at_origin") {
  TEST_CASE("examples") {
    CHECK(eval_at_origin(parse_expr("cos(x1)", 1)) == 1);
    CHECK(eval_at_origin(parse_expr("2*sin(x1)*cos(x1)", 1)) == 0);
    CHECK(eval_at_origin(parse_expr("t^2", 1)) == 0);
    CHECK(eval_at_origin(parse_expr("exp(t) + 1/3", 1)) == q("4/3"));
    CHECK(eval_at_origin(parse_expr("(2 + x1)/(3 - t)", 1)) == q("2/3"));
  }

  TEST_CASE("errors") {
    CHECK_THROWS_AS(eval_at_origin(parse_expr("1/x1", 1)), EvaluationError);
    CHECK_THROWS_AS(eval_at_origin(parse_expr("sin(1 + x1)", 1)), EvaluationError);
    CHECK_THROWS_AS(eval_at_origin(parse_expr("exp(2)", 1)), EvaluationError);
  }
}

TEST_SUITE("simplify") {
  TEST_CASE("examples") {
    CHECK(simplify(parse_expr("0*sin(t) + x1", 1)) == x(1));
    CHECK(simplify(parse_expr("cos(x1)*1", 1)) == Expr::cos(x(1)));
    CHECK(simplify(parse_expr("t + t", 1)) == simplify(parse_expr("2*t", 1)));
    CHECK(simplify(parse_expr("x1*x1*x1", 1)) == Expr::power(x(1), 3));
    CHECK(simplify(parse_expr("x1 - x1", 1)).is_zero());
    CHECK(simplify(parse_expr("(x1^2)^3", 1)) == Expr::power(x(1), 6));
    CHECK(simplify(parse_expr("sin(0) + cos(0) + exp(0)", 1)) == c("2"));
  }

  TEST_CASE("idempotent and value preserving") {
    ExprGenerator gen(23);
    for (int i = 0; i < 200; ++i) {
      Expr e = gen.any(3);
      Expr s = simplify(e);
      CAPTURE(to_string(e));
      CHECK(simplify(s) == s);
      CHECK(eval_at_origin(s) == eval_at_origin(e));
      for (int k = 0; k < 100; ++k) {
        double p[4];
        for (double& v : p) v = gen.uniform(-0.4, 0.4);
        double a = evaluate(e, p[0], std::span<const double>(p + 1, 3));
        double b = evaluate(s, p[0], std::span<const double>(p + 1, 3));
        CHECK(std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)));
      }
    }
  }
}

TEST_CASE("state substitution and variable range") {
  Expr e = parse_expr("2*x1^2*sin(t) + t*x3", 3);
  CHECK(substitute_zero_state(e).is_zero());
  CHECK(max_state_index(e) == 3);
  CHECK(max_state_index(parse_expr("t^2", 3)) == 0);
  CHECK(substitute_zero_state(parse_expr("t + x1", 1)) == t());
}
