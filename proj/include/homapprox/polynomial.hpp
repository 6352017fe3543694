#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "homapprox/expr.hpp"
#include "homapprox/rational.hpp"

namespace homapprox {

// Polynomial in (t, x1, ..., xn) with rational coefficients. Exponent vectors
// have n + 1 entries, entry 0 belonging to t.
class Polynomial {
 public:
  using Exponents = std::vector<int>;

  Polynomial() = default;
  explicit Polynomial(int n) : n_(n) {}

  static Polynomial constant(int n, const Rational& c);
  // t^e0 x1^e1 ... xn^en with coefficient c.
  static Polynomial monomial(int n, Exponents exponents, const Rational& c = 1);

  int dimension() const { return n_; }
  bool is_zero() const { return terms_.empty(); }
  const std::map<Exponents, Rational>& terms() const { return terms_; }
  Rational coefficient(const Exponents& exponents) const;

  void add(const Exponents& exponents, const Rational& c);

  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator-=(const Polynomial& other);
  Polynomial& operator*=(const Rational& c);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, const Rational& c) { return a *= c; }
  Polynomial operator-() const { return *this * Rational(-1); }
  bool operator==(const Polynomial& other) const { return n_ == other.n_ && terms_ == other.terms_; }

  // Largest state index with a nonzero exponent (0 if none).
  int max_state_index() const;
  int max_time_degree() const;

  // Terms by descending total degree, then descending exponents (t first).
  // "-1/5*t^2 + 2/5*t*x1"; zero renders as "0". Parses back with parse_expr.
  std::string to_string() const;
  std::string to_latex() const;
  Expr to_expr() const;
  double evaluate(double t, std::span<const double> x) const;

  // [{"coeff": "p/q", "exponents": [e0, ..., en]}, ...] in printing order.
  nlohmann::ordered_json to_json() const;

 private:
  std::vector<std::pair<Exponents, Rational>> sorted_terms() const;

  int n_ = 0;
  std::map<Exponents, Rational> terms_;
};

}  // namespace homapprox
