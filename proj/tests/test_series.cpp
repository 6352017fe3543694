#include <map>

#include <doctest.h>

#include "homapprox/error.hpp"
#include "homapprox/lie_basis.hpp"
#include "homapprox/series.hpp"
#include "support.hpp"

using namespace homapprox;
using testing_support::three_state;
using testing_support::make_system;
using testing_support::q;

namespace {

RationalVector vec(std::initializer_list<int> entries) {
  RationalVector v;
  for (int e : entries) v.emplace_back(e);
  return v;
}

std::vector<Expr> exprs(const std::vector<std::string>& text, int n) {
  std::vector<Expr> out;
  for (const auto& s : text) out.push_back(parse_expr(s, n));
  return out;
}

std::vector<Expr> simplified(std::vector<Expr> v) {
  for (auto& e : v) e = simplify(e);
  return v;
}

std::vector<Expr> identity(int n) {
  std::vector<Expr> out;
  for (int i = 1; i <= n; ++i) out.push_back(Expr::variable(Variable::x(i)));
  return out;
}

}  // namespace

TEST_SUITE("operators") {
  TEST_CASE("R_a") {
    auto sys = three_state();
    CHECK(apply_R_a(sys, identity(3)) == simplified(sys.a));
    auto f = exprs({"-sin(x1)^2", "0", "0"}, 3);
    for (const auto& e : apply_R_a(sys, f)) CHECK(e.is_zero());
    for (const auto& e : apply_R_a(sys, exprs({"2", "-1/3", "5"}, 3))) CHECK(e.is_zero());
    auto g = apply_R_a(sys, exprs({"t*x2", "0", "0"}, 3));
    CHECK(g[0] == simplify(parse_expr("x2 - t*sin(x1)^2", 3)));
  }

  TEST_CASE("R_b") {
    auto sys = three_state();
    CHECK(apply_R_b(sys, identity(3)) == simplified(sys.b));
    auto rb = apply_R_b(sys, sys.b);
    CHECK(eval_at_origin(rb[0]) == 0);
    CHECK(rb[0] == simplify(parse_expr("-sin(x1)*cos(x1)", 3)));
    for (const auto& e : apply_R_b(sys, exprs({"0", "0", "0"}, 3))) CHECK(e.is_zero());
  }

  TEST_CASE("ad recursion") {
    auto sys = three_state();
    CHECK(apply_ad(sys, 0, identity(3)) == apply_R_b(sys, identity(3)));
    // ad R_b = R_a R_b - R_b R_a.
    auto e = identity(3);
    auto expected = apply_R_a(sys, apply_R_b(sys, e));
    auto other = apply_R_b(sys, apply_R_a(sys, e));
    auto got = apply_ad(sys, 1, e);
    for (int i = 0; i < 3; ++i) CHECK(got[i] == simplify(Expr::sum({expected[i], Expr::negation(other[i])})));
  }
}

TEST_SUITE("moment coefficients") {
  TEST_CASE("examples") {
    auto sys = three_state();
    CHECK(moment_coefficient(sys, Word{0}) == vec({1, 0, 0}));
    CHECK(moment_coefficient(sys, Word{2}) == vec({0, -1, 0}));
    CHECK(moment_coefficient(sys, Word{0, 1}) == vec({0, 2, 0}));
    CHECK(moment_coefficient(sys, Word{0, 0, 0}) == vec({-1, 0, 0}));
  }

  TEST_CASE("hand-integrated systems") {
    // x1' = u, x2' = x1: backward from the origin, x1(0) = -xi_0, x2(0) = xi_1.
    auto chain = make_system({"0", "x1"}, {"1", "0"});
    auto table = series_up_to(chain, 6);
    for (const auto& [w, v] : table.coeffs) {
      CAPTURE(w.to_string());
      if (w == Word{0}) CHECK(v == vec({-1, 0}));
      else if (w == Word{1}) CHECK(v == vec({0, 1}));
      else CHECK(is_zero(v));
    }
    // x1' = t u: x1(0) = -xi_1.
    auto timed = series_up_to(make_system({"0"}, {"t"}), 6);
    for (const auto& [w, v] : timed.coeffs) CHECK(v == (w == Word{1} ? vec({-1}) : vec({0})));
    // x' = x u: x(0) = 0 for every control, so the series vanishes.
    CHECK(series_up_to(make_system({"0"}, {"x1"}), 6).nonzero_count() == 0);
  }
}

TEST_SUITE("series_up_to") {
  TEST_CASE("worked example to order four") {
    auto table = series_up_to(three_state(), 4);
    std::map<Word, RationalVector> expected{
        {Word{0}, vec({1, 0, 0})},       {Word{2}, vec({0, -1, 0})},      {Word{0, 1}, vec({0, 2, 0})},
        {Word{0, 0, 0}, vec({-1, 0, 0})}, {Word{2, 0}, vec({0, 0, -1})},   {Word{0, 2}, vec({0, 0, -2})},
        {Word{0, 1, 0}, vec({0, 0, 2})}, {Word{0, 0, 1}, vec({0, 0, -2})}};
    CHECK(table.coeffs.size() == 15);
    CHECK(table.nonzero_count() == expected.size());
    for (const auto& [w, v] : table.coeffs) {
      CAPTURE(w.to_string());
      auto it = expected.find(w);
      if (it == expected.end()) CHECK(is_zero(v));
      else CHECK(v == it->second);
    }
  }

  TEST_CASE("zero system") {
    auto table = series_up_to(make_system({"0", "0"}, {"0", "0"}), 6);
    CHECK(table.coeffs.size() == 63);
    CHECK(table.nonzero_count() == 0);
  }

  TEST_CASE("agrees with the symbolic formula word by word") {
    auto sys = three_state();
    auto table = series_up_to(sys, 5);
    for (const auto& [w, v] : table.coeffs) {
      CAPTURE(w.to_string());
      CHECK(v == moment_coefficient(sys, w));
    }
    auto other = make_system({"0", "x1^2 + sin(t)*x1", "x1*x2 - t*x2"}, {"1 + x2", "exp(x1) - 1", "cos(t)"});
    auto other_table = series_up_to(other, 5);
    for (const auto& [w, v] : other_table.coeffs) {
      CAPTURE(w.to_string());
      CHECK(v == moment_coefficient(other, w));
    }
  }

  TEST_CASE("table accessors") {
    auto table = series_up_to(three_state(), 3);
    CHECK(table.at(Word{2}) == vec({0, -1, 0}));
    CHECK_THROWS(table.at(Word{0, 0, 0, 0}));
    CHECK(table.apply(xi({0, 1}) - 2 * xi({2})) == vec({0, 4, 0}));
    auto json = table.to_json();
    REQUIRE(json.size() == 4);
    CHECK(json[0]["word"] == nlohmann::json::array({0}));
    CHECK(json[0]["coeff"] == nlohmann::json::array({"1", "0", "0"}));
  }
}

TEST_SUITE("lie coefficients") {
  TEST_CASE("seven basis elements") {
    auto table = series_up_to(three_state(), 4);
    auto basis = build_lie_basis(4);
    const RationalVector expected[] = {vec({1, 0, 0}), vec({0, 0, 0}), vec({0, -1, 0}), vec({0, 2, 0}),
                                       vec({0, 0, 0}), vec({0, 0, -1}), vec({0, 0, 6})};
    for (std::size_t i = 0; i < 7; ++i) {
      CAPTURE(i + 1);
      CHECK(lie_coefficient(table, basis[i]) == expected[i]);
    }
  }

  TEST_CASE("linearity") {
    auto table = series_up_to(three_state(), 5);
    auto basis = build_lie_basis(5);
    const Rational c[] = {q("3/2"), q("-7"), q("2/9")};
    for (std::size_t i = 0; i + 2 < basis.size(); ++i) {
      LieBasisElement combo = basis[i];
      combo.expansion = c[0] * basis[i].expansion + c[1] * basis[i + 1].expansion + c[2] * basis[i + 2].expansion;
      RationalVector expected(3);
      for (int k = 0; k < 3; ++k) {
        auto v = lie_coefficient(table, basis[i + k]);
        for (int j = 0; j < 3; ++j) expected[j] += c[k] * v[j];
      }
      CHECK(lie_coefficient(table, combo) == expected);
    }
  }

  TEST_CASE("realizability up to order five") {
    const int N = 5;
    auto table = series_up_to(three_state(), N);
    auto basis = build_lie_basis(N);
    int checked = 0;
    for (const auto& g : basis) {
      if (!is_zero(lie_coefficient(table, g))) continue;
      for (int m = 1; g.order + m <= N; ++m) {
        for (const Word& z : enumerate_basis(m)) {
          CAPTURE(g.bracket_string());
          CAPTURE(z.to_string());
          CHECK(is_zero(table.apply(concat(g.expansion, AlgElem::word(z)))));
          ++checked;
        }
      }
    }
    CHECK(checked > 0);
  }
}

TEST_SUITE("validate") {
  TEST_CASE("accepts the examples") {
    CHECK_NOTHROW(three_state().validate());
    CHECK_NOTHROW(make_system({"sin(t)*x1"}, {"1"}).validate());
  }

  TEST_CASE("rejects malformed systems") {
    ControlSystem empty;
    CHECK_THROWS_AS(empty.validate(), InputError);

    auto sys = make_system({"0", "x1"}, {"1", "0"});
    sys.b.pop_back();
    CHECK_THROWS_AS(sys.validate(), InputError);

    auto wide = make_system({"0"}, {"1"});
    wide.a[0] = parse_expr("x2", 2);
    CHECK_THROWS_AS(wide.validate(), InputError);
  }

  TEST_CASE("drift must vanish at the origin") {
    CHECK_THROWS_AS(make_system({"t"}, {"1"}).validate(), InputError);
    CHECK_THROWS_AS(make_system({"0", "cos(x1)"}, {"1", "0"}).validate(), InputError);
    CHECK_THROWS_AS(make_system({"x1 + 1/1000"}, {"1"}).validate(), InputError);
    CHECK_NOTHROW(make_system({"sin(t*x1)"}, {"1"}).validate());
    CHECK_NOTHROW(make_system({"exp(x1) - 1"}, {"1"}).validate());
  }
}
