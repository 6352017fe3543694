#include "homapprox/taylor.hpp"

#include <algorithm>
#include <unordered_map>

#include "homapprox/error.hpp"

namespace homapprox {

TruncatedSeries::TruncatedSeries(int variables, int degree) : variables_(variables), degree_(degree) {
  if (variables < 1 || variables > kMaxVariables) throw InputError("too many variables for a Taylor expansion");
  if (degree > kMaxDegree) throw InputError("Taylor degree too large");
}

TruncatedSeries TruncatedSeries::constant(int variables, int degree, const Rational& c) {
  TruncatedSeries s(variables, degree);
  if (degree >= 0) s.add_term(0, 0, c);
  return s;
}

TruncatedSeries TruncatedSeries::variable(int variables, int degree, int index) {
  if (index < 0 || index >= variables) throw InputError("Taylor variable index out of range");
  TruncatedSeries s(variables, degree);
  if (degree >= 1) s.add_term(Monomial{1} << (kBits * index), 1, Rational(1));
  return s;
}

void TruncatedSeries::add_term(Monomial mono, int degree, const Rational& c) {
  if (c != 0 && degree <= degree_) terms_.push_back({mono, degree, c});
}

void TruncatedSeries::normalize() {
  std::sort(terms_.begin(), terms_.end(), [](const Term& a, const Term& b) { return a.mono < b.mono; });
  std::vector<Term> merged;
  merged.reserve(terms_.size());
  for (auto& t : terms_) {
    if (!merged.empty() && merged.back().mono == t.mono) {
      merged.back().coef += t.coef;
    } else {
      merged.push_back(std::move(t));
    }
  }
  std::erase_if(merged, [](const Term& t) { return t.coef == 0; });
  terms_ = std::move(merged);
}

Rational TruncatedSeries::constant_term() const {
  if (degree_ < 0) throw InternalError("constant term of an exhausted Taylor expansion");
  if (!terms_.empty() && terms_.front().mono == 0) return terms_.front().coef;
  return 0;
}

Rational TruncatedSeries::coefficient(const std::vector<int>& exponents) const {
  Monomial mono = 0;
  for (std::size_t i = 0; i < exponents.size(); ++i) mono |= Monomial(exponents[i]) << (kBits * i);
  auto it = std::lower_bound(terms_.begin(), terms_.end(), mono,
                             [](const Term& t, Monomial m) { return t.mono < m; });
  return it != terms_.end() && it->mono == mono ? it->coef : Rational(0);
}

TruncatedSeries TruncatedSeries::truncated(int degree) const {
  TruncatedSeries s(variables_, std::min(degree, degree_));
  for (const auto& t : terms_) {
    if (t.degree <= s.degree_) s.terms_.push_back(t);
  }
  return s;
}

TruncatedSeries TruncatedSeries::derivative(int index) const {
  TruncatedSeries s(variables_, degree_ - 1);
  const Monomial unit = Monomial{1} << (kBits * index);
  for (const auto& t : terms_) {
    int e = exponent(t.mono, index);
    if (e == 0) continue;
    s.terms_.push_back({t.mono - unit, t.degree - 1, t.coef * e});
  }
  // Lowering one exponent keeps the monomial order.
  return s;
}

TruncatedSeries& TruncatedSeries::operator+=(const TruncatedSeries& other) {
  degree_ = std::min(degree_, other.degree_);
  std::erase_if(terms_, [&](const Term& t) { return t.degree > degree_; });
  for (const auto& t : other.terms_) add_term(t.mono, t.degree, t.coef);
  normalize();
  return *this;
}

TruncatedSeries& TruncatedSeries::operator-=(const TruncatedSeries& other) {
  degree_ = std::min(degree_, other.degree_);
  std::erase_if(terms_, [&](const Term& t) { return t.degree > degree_; });
  for (const auto& t : other.terms_) add_term(t.mono, t.degree, -t.coef);
  normalize();
  return *this;
}

TruncatedSeries& TruncatedSeries::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
  } else {
    for (auto& t : terms_) t.coef *= c;
  }
  return *this;
}

TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
  TruncatedSeries s(a.variables_, std::min(a.degree_, b.degree_));
  if (a.terms_.empty() || b.terms_.empty()) return s;
  std::unordered_map<TruncatedSeries::Monomial, std::size_t> slot;
  for (const auto& x : a.terms_) {
    if (x.degree > s.degree_) continue;
    for (const auto& y : b.terms_) {
      int d = x.degree + y.degree;
      if (d > s.degree_) continue;
      auto mono = x.mono + y.mono;
      auto [it, inserted] = slot.try_emplace(mono, s.terms_.size());
      if (inserted) {
        s.terms_.push_back({mono, d, x.coef * y.coef});
      } else {
        s.terms_[it->second].coef += x.coef * y.coef;
      }
    }
  }
  s.normalize();
  return s;
}

TruncatedSeries TruncatedSeries::pow(unsigned k) const {
  TruncatedSeries result = constant(variables_, degree_, 1);
  TruncatedSeries base = *this;
  while (k) {
    if (k & 1u) result = result * base;
    k >>= 1;
    if (k) base = base * base;
  }
  return result;
}

TruncatedSeries TruncatedSeries::reciprocal() const {
  Rational c0 = constant_term();
  if (c0 == 0) throw EvaluationError("division by zero at the origin");
  // 1/(c0 + r) = (1/c0) * sum_k (-r/c0)^k
  TruncatedSeries q = *this - constant(variables_, degree_, c0);
  q *= Rational(-1) / c0;
  TruncatedSeries result = constant(variables_, degree_, 1);
  TruncatedSeries term = result;
  for (int k = 1; k <= degree_; ++k) {
    term = term * q;
    if (term.is_zero()) break;
    result += term;
  }
  result *= Rational(1) / c0;
  return result;
}

namespace {

// sum_{k in ks} coef(k) * s^k, for s without constant term.
template <class Coef>
TruncatedSeries power_series(const TruncatedSeries& s, int first, int step, Coef coef) {
  TruncatedSeries result(s.variables(), s.degree());
  TruncatedSeries power = TruncatedSeries::constant(s.variables(), s.degree(), 1);
  for (int k = 0; k <= s.degree(); ++k) {
    if (k > 0) power = power * s;
    if (power.is_zero()) break;
    if (k >= first && (k - first) % step == 0) {
      TruncatedSeries term = power;
      term *= coef(k);
      result += term;
    }
  }
  return result;
}

Rational factorial(int k) {
  mpz_class f = 1;
  for (int i = 2; i <= k; ++i) f *= i;
  return Rational(f);
}

void require_vanishing(const TruncatedSeries& s, const char* name) {
  if (s.constant_term() != 0) {
    throw EvaluationError(std::string(name) + " of an argument nonzero at the origin has no exact value");
  }
}

}  // namespace

TruncatedSeries TruncatedSeries::sin() const {
  require_vanishing(*this, "sin");
  return power_series(*this, 1, 2, [](int k) {
    Rational c = 1 / factorial(k);
    return ((k - 1) / 2) % 2 ? Rational(-c) : c;
  });
}

TruncatedSeries TruncatedSeries::cos() const {
  require_vanishing(*this, "cos");
  return power_series(*this, 0, 2, [](int k) {
    Rational c = 1 / factorial(k);
    return (k / 2) % 2 ? Rational(-c) : c;
  });
}

TruncatedSeries TruncatedSeries::exp() const {
  require_vanishing(*this, "exp");
  return power_series(*this, 0, 1, [](int k) { return Rational(1 / factorial(k)); });
}

TruncatedSeries to_series(const Expr& e, int variables, int degree) {
  switch (e.kind()) {
    case ExprKind::kConstant:
      return TruncatedSeries::constant(variables, degree, e.value());
    case ExprKind::kVariable:
      return TruncatedSeries::variable(variables, degree, e.var().index);
    case ExprKind::kNegation: {
      TruncatedSeries s = to_series(e.operands()[0], variables, degree);
      s *= Rational(-1);
      return s;
    }
    case ExprKind::kSum: {
      TruncatedSeries s(variables, degree);
      for (const auto& t : e.operands()) s += to_series(t, variables, degree);
      return s;
    }
    case ExprKind::kProduct: {
      TruncatedSeries s = TruncatedSeries::constant(variables, degree, 1);
      for (const auto& f : e.operands()) {
        s = s * to_series(f, variables, degree);
        if (s.is_zero()) break;
      }
      return s;
    }
    case ExprKind::kQuotient:
      return to_series(e.operands()[0], variables, degree) *
             to_series(e.operands()[1], variables, degree).reciprocal();
    case ExprKind::kPower:
      return to_series(e.operands()[0], variables, degree).pow(e.exponent());
    case ExprKind::kSin:
      return to_series(e.operands()[0], variables, degree).sin();
    case ExprKind::kCos:
      return to_series(e.operands()[0], variables, degree).cos();
    case ExprKind::kExp:
      return to_series(e.operands()[0], variables, degree).exp();
  }
  throw InternalError("to_series: unknown expression kind");
}

}  // namespace homapprox
