#include <cmath>
#include <random>

#include <doctest.h>

#include "homapprox/verify.hpp"
#include "support.hpp"

using namespace homapprox;
using testing_support::three_state;
using testing_support::three_state_shifted;
using testing_support::make_system;
using testing_support::q;
using testing_support::scalar_system;

namespace {

// For u = 1 the iterated integral of s^m1 ... s^mk is a single power of
// theta divided by the orders of all suffixes.
double constant_control_moment(const Word& w, double theta) {
  double denom = 1;
  for (std::size_t i = 0; i < w.length(); ++i) denom *= w.suffix(i).order();
  return std::pow(theta, w.order()) / denom;
}

std::vector<Word> words_up_to(int N) {
  std::vector<Word> out;
  for (int m = 1; m <= N; ++m)
    for (const auto& w : enumerate_basis(m)) out.push_back(w);
  return out;
}

}  // namespace

TEST_SUITE("moments") {
  TEST_CASE("constant control") {
    auto u = ControlSignal::constant(1);
    for (double theta : {0.1, 0.5, 1.0}) {
      auto m = evaluate_moments(u, theta, 6);
      CHECK(m.at(Word{0}) == doctest::Approx(theta).epsilon(1e-13));
      CHECK(m.at(Word{0, 0}) == doctest::Approx(theta * theta / 2).epsilon(1e-13));
      CHECK(m.at(Word{1}) == doctest::Approx(theta * theta / 2).epsilon(1e-13));
      for (const auto& w : words_up_to(6)) {
        CAPTURE(w.to_string());
        CHECK(m.at(w) == doctest::Approx(constant_control_moment(w, theta)).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("bounded by theta to the order") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 20; ++trial) {
      auto u = ControlSignal::random(rng);
      CHECK(u.pieces() >= 4);
      CHECK(u.pieces() <= 16);
      for (double v : u.values()) CHECK(std::abs(v) <= 1);
      for (double theta : {0.05, 0.3, 1.0}) {
        auto m = evaluate_moments(u, theta, 6);
        for (const auto& w : words_up_to(6)) CHECK(std::abs(m.at(w)) <= std::pow(theta, w.order()) + 1e-15);
      }
    }
  }

  TEST_CASE("products of moments are shuffles") {
    std::mt19937_64 rng(37);
    const int N = 6;
    auto words = words_up_to(N);
    double worst = 0;
    for (int trial = 0; trial < 50; ++trial) {
      auto u = ControlSignal::random(rng);
      for (double theta : {0.05, 0.1}) {
        auto m = evaluate_moments(u, theta, N);
        for (const auto& a : words)
          for (const auto& b : words) {
            if (a.order() + b.order() > N) continue;
            double lhs = m.at(a) * m.at(b);
            double rhs = m.evaluate(shuffle(AlgElem::word(a), AlgElem::word(b)));
            worst = std::max(worst, std::abs(lhs - rhs));
          }
      }
    }
    CHECK(worst <= 1e-8);
  }

  TEST_CASE("halving the step changes little") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 10; ++trial) {
      auto u = ControlSignal::random(rng);
      auto coarse = evaluate_moments(u, 0.2, 6, 2000);
      auto fine = evaluate_moments(u, 0.2, 6, 4000);
      for (const auto& [w, v] : coarse.values) CHECK(std::abs(v - fine.at(w)) < 1e-10);
    }
  }

  TEST_CASE("linear extension") {
    auto m = evaluate_moments(ControlSignal::constant(1), 0.5, 3);
    CHECK(m.evaluate(AlgElem::scalar(2) + 4 * xi({0})) == doctest::Approx(4.0));
    CHECK(m.at(Word{}) == 1);
  }
}

TEST_SUITE("trajectories") {
  TEST_CASE("backward endpoint examples") {
    for (double theta : {0.1, 0.7}) {
      auto x = backward_endpoint(scalar_system(), ControlSignal::constant(1), theta);
      CHECK(x[0] == doctest::Approx(-theta).epsilon(1e-13));
    }
    for (double v : backward_endpoint(three_state(), ControlSignal::constant(0), 0.2)) CHECK(v == 0);
  }

  TEST_CASE("series tracks the trajectory") {
    auto sys = three_state();
    auto u = ControlSignal::constant(1);
    const double theta = 0.1;
    auto x = backward_endpoint(sys, u, theta);
    auto m = evaluate_moments(u, theta, 8);
    auto s4 = series_endpoint(series_up_to(sys, 4), m);
    auto s8 = series_endpoint(series_up_to(sys, 8), m);
    double e4 = 0, e8 = 0;
    for (int i = 0; i < 3; ++i) {
      e4 = std::max(e4, std::abs(x[i] - s4[i]));
      e8 = std::max(e8, std::abs(x[i] - s8[i]));
    }
    CHECK(e4 <= 10 * std::pow(theta, 5));
    CHECK(e8 <= 10 * std::pow(theta, 9));
  }

  TEST_CASE("order check slopes") {
    auto sys = three_state();
    auto table = series_up_to(sys, 4);
    std::mt19937_64 rng(43);
    for (int trial = 0; trial < 3; ++trial) {
      auto check = order_check(sys, table, ControlSignal::random(rng), geometric_thetas());
      CHECK(check.thetas.size() == 6);
      CHECK(check.slope >= 4 + kSlopeMargin);
    }
    auto zero = order_check(sys, table, ControlSignal::constant(0), geometric_thetas());
    for (double r : zero.residuals) CHECK(r == 0);
    CHECK(std::isnan(zero.slope));
    CHECK(zero.to_json()["slope"].is_null());
  }

  TEST_CASE("geometric thetas") {
    auto thetas = geometric_thetas(0.2, 3);
    CHECK(thetas == std::vector<double>{0.2, 0.1, 0.05});
  }
}

TEST_SUITE("verify_result") {
  TEST_CASE("self-consistency text") {
    auto result = approximate(three_state());
    CHECK(self_consistency_error(result.nonautonomous, result.projection).empty());
    Projection wrong = result.projection;
    wrong.ell_tilde[1] += q("1/7") * xi({1, 0});
    CHECK_FALSE(self_consistency_error(result.nonautonomous, wrong).empty());
  }

  TEST_CASE("worked examples pass") {
    for (const auto& sys : {three_state(), three_state_shifted()}) {
      auto result = approximate(sys);
      auto report = verify_result(sys, result, 4);
      CHECK(report.pass);
      CHECK(report.order == 4);
      CHECK(report.slope_threshold == doctest::Approx(4.7));
      CHECK(report.original.size() == 4);
      CHECK(report.nonautonomous_residual <= kSelfResidualTolerance);
      CHECK(report.autonomous_residual.has_value() == std::holds_alternative<PolynomialSystem>(result.autonomous));
      auto json = report.to_json();
      CHECK(json["pass"] == true);
    }
  }
}
