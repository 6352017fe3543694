#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "homapprox/rational.hpp"
#include "homapprox/word.hpp"

namespace homapprox {

// Finite rational combination of words: an element of the free associative
// algebra of nonlinear power moments. Zero coefficients are never stored.
// The coefficient of the empty word is the scalar part; only psi() produces it.
class AlgElem {
 public:
  using Terms = std::map<Word, Rational>;

  AlgElem() = default;
  static AlgElem word(const Word& w, const Rational& coefficient = 1);
  static AlgElem scalar(const Rational& value);

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  Rational coefficient(const Word& w) const;
  Rational scalar() const { return coefficient(Word{}); }

  void add(const Word& w, const Rational& coefficient);

  // All words have order m (the zero element is homogeneous of every order).
  bool is_homogeneous(int m) const;
  // Common order of all words, or nullopt when zero or mixed.
  std::optional<int> order() const;

  AlgElem& operator+=(const AlgElem& other);
  AlgElem& operator-=(const AlgElem& other);
  AlgElem& operator*=(const Rational& factor);
  friend AlgElem operator+(AlgElem a, const AlgElem& b) { return a += b; }
  friend AlgElem operator-(AlgElem a, const AlgElem& b) { return a -= b; }
  friend AlgElem operator*(AlgElem a, const Rational& f) { return a *= f; }
  friend AlgElem operator*(const Rational& f, AlgElem a) { return a *= f; }
  AlgElem operator-() const { return *this * Rational(-1); }
  bool operator==(const AlgElem& other) const { return terms_ == other.terms_; }

  // "1/5*xi_{2} - 2/5*xi_{0 1}"; zero renders as "0".
  std::string to_string() const;
  std::string to_latex() const;

 private:
  Terms terms_;
};

// Shorthand for a single basis word, e.g. xi({0, 1}).
inline AlgElem xi(std::initializer_list<int> letters) { return AlgElem::word(Word(letters)); }

// dim A^m = 2^(m-1).
std::size_t graded_dimension(int m);

// Words of order m in canonical order (length ascending, then lexicographic).
std::vector<Word> enumerate_basis(int m);

// Position of w inside enumerate_basis(w.order()), computed combinatorially.
std::size_t basis_index(const Word& w);

// Coordinates of a homogeneous element of order m in the canonical basis.
// Throws InputError if some word has another order.
RationalVector vectorize(const AlgElem& e, int m);
std::vector<std::pair<std::size_t, Rational>> vectorize_sparse(const AlgElem& e, int m);
AlgElem devectorize(const RationalVector& v, int m);

// Concatenation product, extended bilinearly.
AlgElem concat(const AlgElem& a, const AlgElem& b);

// Shuffle product of two words with multiplicities; memoized per thread.
const std::vector<std::pair<Word, std::int64_t>>& shuffle_words(const Word& u, const Word& v);
AlgElem shuffle(const AlgElem& a, const AlgElem& b);
// a shuffled with itself q times; q = 0 gives the unit.
AlgElem shuffle_power(const AlgElem& a, int q);

// Derivation lowering one letter: phi(xi_m) = m xi_{m-1}, extended by Leibniz.
AlgElem phi(const AlgElem& e);
// Drops a trailing 0 letter: psi(w 0) = w, psi(xi_0) = 1, psi(w) = 0 otherwise.
AlgElem psi(const AlgElem& e);

// Word-basis inner product (the words form an orthonormal basis).
Rational inner_product(const AlgElem& a, const AlgElem& b);

}  // namespace homapprox
