#pragma once

#include <random>
#include <string>
#include <vector>

#include "homapprox/approx.hpp"
#include "homapprox/parser.hpp"
#include "homapprox/report.hpp"
#include "homapprox/series.hpp"

namespace testing_support {

inline homapprox::ControlSystem make_system(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  homapprox::ControlSystem sys;
  sys.n = static_cast<int>(a.size());
  for (const auto& e : a) sys.a.push_back(homapprox::parse_expr(e, sys.n));
  for (const auto& e : b) sys.b.push_back(homapprox::parse_expr(e, sys.n));
  return sys;
}

inline std::string data_path(const std::string& name) { return std::string(HOMAPPROX_TEST_DATA) + "/" + name; }

inline homapprox::ControlSystem three_state() { return homapprox::read_system_file(data_path("three_state.sys")); }
inline homapprox::ControlSystem three_state_shifted() {
  return homapprox::read_system_file(data_path("three_state_shifted.sys"));
}
inline homapprox::ControlSystem scalar_system() { return make_system({"0"}, {"1"}); }

inline homapprox::Rational q(const char* text) { return homapprox::parse_rational(text); }

// Random word with letters in [0, max_letter] and the given length.
inline homapprox::Word random_word(std::mt19937_64& rng, int length, int max_letter) {
  std::uniform_int_distribution<int> letter(0, max_letter);
  homapprox::Word w;
  for (int i = 0; i < length; ++i) w.push_back(letter(rng));
  return w;
}

// Random homogeneous element of order m with up to `terms` words.
inline homapprox::AlgElem random_homogeneous(std::mt19937_64& rng, int m, int terms = 4) {
  auto basis = homapprox::enumerate_basis(m);
  std::uniform_int_distribution<std::size_t> pick(0, basis.size() - 1);
  std::uniform_int_distribution<int> coef(-5, 5);
  homapprox::AlgElem e;
  for (int i = 0; i < terms; ++i) {
    int c = coef(rng);
    if (c) e.add(basis[pick(rng)], homapprox::Rational(c) / (1 + (i % 3)));
  }
  return e;
}

}  // namespace testing_support
