#include "homapprox/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "homapprox/error.hpp"

namespace homapprox {

Polynomial Polynomial::constant(int n, const Rational& c) {
  Polynomial p(n);
  p.add(Exponents(n + 1, 0), c);
  return p;
}

Polynomial Polynomial::monomial(int n, Exponents exponents, const Rational& c) {
  if (static_cast<int>(exponents.size()) != n + 1) throw InputError("monomial needs n + 1 exponents");
  Polynomial p(n);
  p.add(exponents, c);
  return p;
}

Rational Polynomial::coefficient(const Exponents& exponents) const {
  auto it = terms_.find(exponents);
  return it == terms_.end() ? Rational(0) : it->second;
}

void Polynomial::add(const Exponents& exponents, const Rational& c) {
  if (static_cast<int>(exponents.size()) != n_ + 1) throw InputError("exponent vector has the wrong length");
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(exponents, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  if (other.n_ != n_) throw InputError("adding polynomials of different dimension");
  for (const auto& [e, c] : other.terms_) add(e, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
  if (other.n_ != n_) throw InputError("subtracting polynomials of different dimension");
  for (const auto& [e, c] : other.terms_) add(e, -c);
  return *this;
}

Polynomial& Polynomial::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
  } else {
    for (auto& [e, coef] : terms_) coef *= c;
  }
  return *this;
}

int Polynomial::max_state_index() const {
  int top = 0;
  for (const auto& [e, c] : terms_) {
    for (int i = 1; i <= n_; ++i) {
      if (e[i] > 0) top = std::max(top, i);
    }
  }
  return top;
}

int Polynomial::max_time_degree() const {
  int top = 0;
  for (const auto& [e, c] : terms_) top = std::max(top, e[0]);
  return top;
}

std::vector<std::pair<Polynomial::Exponents, Rational>> Polynomial::sorted_terms() const {
  std::vector<std::pair<Exponents, Rational>> out(terms_.begin(), terms_.end());
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    int da = std::accumulate(a.first.begin(), a.first.end(), 0);
    int db = std::accumulate(b.first.begin(), b.first.end(), 0);
    if (da != db) return da > db;
    return a.first > b.first;
  });
  return out;
}

namespace {

std::string variable_name(int i) { return i == 0 ? "t" : "x" + std::to_string(i); }

// Monomial part without coefficient, e.g. "t*x1^2"; empty for the constant.
std::string monomial_text(const Polynomial::Exponents& e, bool latex) {
  std::string out;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (e[i] == 0) continue;
    std::string name = latex && i > 0 ? "x_{" + std::to_string(i) + "}" : variable_name(static_cast<int>(i));
    if (!out.empty()) out += latex ? " " : "*";
    out += name;
    if (e[i] > 1) out += latex ? "^{" + std::to_string(e[i]) + "}" : "^" + std::to_string(e[i]);
  }
  return out;
}

}  // namespace

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [e, c] : sorted_terms()) {
    Rational mag = abs(c);
    if (first) {
      if (c < 0) out += "-";
    } else {
      out += c < 0 ? " - " : " + ";
    }
    first = false;
    std::string mono = monomial_text(e, false);
    if (mono.empty()) {
      out += homapprox::to_string(mag);
    } else if (mag == 1) {
      out += mono;
    } else {
      out += homapprox::to_string(mag) + "*" + mono;
    }
  }
  return out;
}

std::string Polynomial::to_latex() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [e, c] : sorted_terms()) {
    Rational mag = abs(c);
    if (first) {
      if (c < 0) out += "-";
    } else {
      out += c < 0 ? " - " : " + ";
    }
    first = false;
    std::string mono = monomial_text(e, true);
    if (mono.empty()) {
      out += homapprox::to_latex(mag);
    } else if (mag == 1) {
      out += mono;
    } else {
      out += homapprox::to_latex(mag) + " " + mono;
    }
  }
  return out;
}

Expr Polynomial::to_expr() const {
  std::vector<Expr> sum;
  for (const auto& [e, c] : sorted_terms()) {
    std::vector<Expr> factors{Expr::constant(c)};
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      Expr v = Expr::variable(Variable{static_cast<int>(i)});
      factors.push_back(e[i] == 1 ? v : Expr::power(v, static_cast<unsigned>(e[i])));
    }
    sum.push_back(Expr::product(std::move(factors)));
  }
  return simplify(Expr::sum(std::move(sum)));
}

double Polynomial::evaluate(double t, std::span<const double> x) const {
  double total = 0;
  for (const auto& [e, c] : terms_) {
    double term = c.get_d() * std::pow(t, e[0]);
    for (int i = 1; i <= n_; ++i) {
      if (e[i]) term *= std::pow(x[i - 1], e[i]);
    }
    total += term;
  }
  return total;
}

nlohmann::ordered_json Polynomial::to_json() const {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (const auto& [e, c] : sorted_terms()) {
    out.push_back({{"coeff", homapprox::to_string(c)}, {"exponents", e}});
  }
  return out;
}

}  // namespace homapprox
