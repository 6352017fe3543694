#pragma once

#include <cstdint>
#include <vector>

#include "homapprox/expr.hpp"
#include "homapprox/rational.hpp"

namespace homapprox {

// Multivariate Taylor polynomial in (t, x1, ..., xn) around the origin with
// exact rational coefficients, known to be exact through total degree
// `degree()`. Variable 0 is t, variable i is x_i.
class TruncatedSeries {
 public:
  static constexpr int kMaxVariables = 12;
  static constexpr int kMaxDegree = 31;

  TruncatedSeries() = default;
  TruncatedSeries(int variables, int degree);

  static TruncatedSeries constant(int variables, int degree, const Rational& c);
  static TruncatedSeries variable(int variables, int degree, int index);

  int variables() const { return variables_; }
  int degree() const { return degree_; }
  bool is_zero() const { return terms_.empty(); }
  Rational constant_term() const;
  std::size_t size() const { return terms_.size(); }

  // Coefficient of t^e[0] x1^e[1] ... ; exponents beyond e.size() are zero.
  Rational coefficient(const std::vector<int>& exponents) const;

  TruncatedSeries truncated(int degree) const;
  TruncatedSeries derivative(int index) const;

  TruncatedSeries& operator+=(const TruncatedSeries& other);
  TruncatedSeries& operator-=(const TruncatedSeries& other);
  TruncatedSeries& operator*=(const Rational& c);
  friend TruncatedSeries operator+(TruncatedSeries a, const TruncatedSeries& b) { return a += b; }
  friend TruncatedSeries operator-(TruncatedSeries a, const TruncatedSeries& b) { return a -= b; }
  friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b);

  TruncatedSeries pow(unsigned k) const;
  // Throw EvaluationError when the constant term rules out an exact result.
  TruncatedSeries reciprocal() const;
  TruncatedSeries sin() const;
  TruncatedSeries cos() const;
  TruncatedSeries exp() const;

 private:
  using Monomial = std::uint64_t;
  static constexpr int kBits = 5;

  struct Term {
    Monomial mono;
    int degree;
    Rational coef;
  };

  static int exponent(Monomial m, int var) { return static_cast<int>((m >> (kBits * var)) & 31u); }
  void add_term(Monomial mono, int degree, const Rational& c);
  void normalize();

  int variables_ = 1;
  int degree_ = 0;
  std::vector<Term> terms_;  // sorted by monomial, no zeros, degree <= degree_
};

// Taylor expansion of e at the origin through total degree `degree`.
TruncatedSeries to_series(const Expr& e, int variables, int degree);

}  // namespace homapprox
