#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "homapprox/algebra.hpp"
#include "homapprox/expr.hpp"
#include "homapprox/lie_basis.hpp"
#include "homapprox/rational.hpp"

namespace homapprox {

// x' = a(t, x) + b(t, x) u with a(t, 0) = 0.
struct ControlSystem {
  int n = 0;
  std::vector<Expr> a;
  std::vector<Expr> b;

  // Throws InputError on shape problems, out-of-range variables or a drift
  // that does not vanish at x = 0.
  void validate() const;
};

// Coefficients v_w of the series for every word of order <= max_order,
// including zero ones.
struct SeriesTable {
  int n = 0;
  int max_order = 0;
  std::map<Word, RationalVector> coeffs;

  const RationalVector& at(const Word& w) const;
  // v extended linearly; the expansion must only use words of order <= max_order.
  RationalVector apply(const AlgElem& e) const;
  std::size_t nonzero_count() const;

  // [{"word": [..], "coeff": ["p/q", ..]}, ...] for nonzero entries.
  nlohmann::ordered_json to_json() const;
};

// R_a f = f_t + f_x a, componentwise, simplified.
std::vector<Expr> apply_R_a(const ControlSystem& sys, const std::vector<Expr>& f);
// R_b f = f_x b, componentwise, simplified.
std::vector<Expr> apply_R_b(const ControlSystem& sys, const std::vector<Expr>& f);
// (ad_{R_a})^j R_b applied to f, through the commutator recursion.
std::vector<Expr> apply_ad(const ControlSystem& sys, int j, const std::vector<Expr>& f);

// v_w = (-1)^k / (m1! ... mk!) ad^{m1} R_b ... ad^{mk} R_b E at t = 0, x = 0,
// evaluated symbolically. Intended for single words and cross-checks; use
// series_up_to for whole tables.
RationalVector moment_coefficient(const ControlSystem& sys, const Word& w);

// All coefficients up to max_order. Works on Taylor expansions truncated to
// the degree each word needs, sharing operator chains between words with a
// common suffix.
SeriesTable series_up_to(const ControlSystem& sys, int max_order);

// v(g) through the expansion of g.
RationalVector lie_coefficient(const SeriesTable& table, const LieBasisElement& g);

}  // namespace homapprox
