#include "homapprox/series.hpp"

#include <cmath>
#include <unordered_map>

#include "homapprox/error.hpp"
#include "homapprox/taylor.hpp"

namespace homapprox {

// --- ControlSystem --------------------------------------------------------

namespace {

// a_i(t, 0) must vanish identically. Symbolic substitution settles most
// inputs; otherwise the Taylor expansion in t and 20 sample points decide.
bool drift_vanishes_at_origin(const Expr& a_i) {
  Expr at_zero = substitute_zero_state(a_i);
  if (at_zero.is_zero()) return true;
  try {
    if (!to_series(at_zero, 1, 16).is_zero()) return false;
  } catch (const EvaluationError&) {
    return false;
  }
  for (int k = 1; k <= 20; ++k) {
    double t = k / 20.0;
    if (std::abs(evaluate(at_zero, t, {})) > 1e-12) return false;
  }
  return true;
}

}  // namespace

void ControlSystem::validate() const {
  if (n < 1) throw InputError("system dimension must be at least 1");
  if (static_cast<int>(a.size()) != n || static_cast<int>(b.size()) != n) {
    throw InputError("drift and control field must have " + std::to_string(n) + " components");
  }
  for (int i = 0; i < n; ++i) {
    if (max_state_index(a[i]) > n || max_state_index(b[i]) > n) {
      throw InputError("component " + std::to_string(i + 1) + " references a state beyond x" + std::to_string(n));
    }
    if (!drift_vanishes_at_origin(a[i])) {
      throw InputError("a" + std::to_string(i + 1) + "(t, 0) is not identically zero; the origin must be an equilibrium");
    }
  }
}

// --- SeriesTable ----------------------------------------------------------

const RationalVector& SeriesTable::at(const Word& w) const {
  auto it = coeffs.find(w);
  if (it == coeffs.end()) {
    throw InputError("series table of order " + std::to_string(max_order) + " has no entry for " + w.to_string());
  }
  return it->second;
}

RationalVector SeriesTable::apply(const AlgElem& e) const {
  RationalVector out(n, Rational(0));
  for (const auto& [w, c] : e.terms()) {
    const RationalVector& v = at(w);
    for (int i = 0; i < n; ++i) {
      if (v[i] != 0) out[i] += c * v[i];
    }
  }
  return out;
}

std::size_t SeriesTable::nonzero_count() const {
  std::size_t count = 0;
  for (const auto& [w, v] : coeffs) count += is_zero(v) ? 0 : 1;
  return count;
}

nlohmann::ordered_json SeriesTable::to_json() const {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (const auto& [w, v] : coeffs) {
    if (is_zero(v)) continue;
    std::vector<std::string> entries;
    for (const auto& q : v) entries.push_back(to_string(q));
    out.push_back({{"word", w.letters()}, {"coeff", entries}});
  }
  return out;
}

// --- symbolic operators ---------------------------------------------------

std::vector<Expr> apply_R_a(const ControlSystem& sys, const std::vector<Expr>& f) {
  std::vector<Expr> out;
  out.reserve(f.size());
  for (const auto& fi : f) {
    std::vector<Expr> terms{differentiate(fi, Variable::t())};
    for (int j = 1; j <= sys.n; ++j) {
      Expr d = differentiate(fi, Variable::x(j));
      if (!d.is_zero() && !sys.a[j - 1].is_zero()) terms.push_back(d * sys.a[j - 1]);
    }
    out.push_back(simplify(Expr::sum(std::move(terms))));
  }
  return out;
}

std::vector<Expr> apply_R_b(const ControlSystem& sys, const std::vector<Expr>& f) {
  std::vector<Expr> out;
  out.reserve(f.size());
  for (const auto& fi : f) {
    std::vector<Expr> terms;
    for (int j = 1; j <= sys.n; ++j) {
      Expr d = differentiate(fi, Variable::x(j));
      if (!d.is_zero() && !sys.b[j - 1].is_zero()) terms.push_back(d * sys.b[j - 1]);
    }
    out.push_back(simplify(Expr::sum(std::move(terms))));
  }
  return out;
}

std::vector<Expr> apply_ad(const ControlSystem& sys, int j, const std::vector<Expr>& f) {
  if (j == 0) return apply_R_b(sys, f);
  // ad^j g = R_a (ad^{j-1} g) - ad^{j-1} (R_a g)
  std::vector<Expr> first = apply_R_a(sys, apply_ad(sys, j - 1, f));
  std::vector<Expr> second = apply_ad(sys, j - 1, apply_R_a(sys, f));
  for (std::size_t i = 0; i < first.size(); ++i) first[i] = simplify(first[i] - second[i]);
  return first;
}

namespace {

Rational factorial(int k) {
  mpz_class f = 1;
  for (int i = 2; i <= k; ++i) f *= i;
  return Rational(f);
}

Rational word_scale(const Word& w) {
  Rational s = (w.length() % 2 == 0) ? 1 : -1;
  for (std::size_t i = 0; i < w.length(); ++i) s /= factorial(w[i]);
  return s;
}

}  // namespace

RationalVector moment_coefficient(const ControlSystem& sys, const Word& w) {
  if (w.empty()) throw InputError("moment_coefficient: empty word");
  std::vector<Expr> f;
  for (int i = 1; i <= sys.n; ++i) f.push_back(Expr::variable(Variable::x(i)));
  for (std::size_t i = w.length(); i-- > 0;) f = apply_ad(sys, w[i], f);
  const Rational scale = word_scale(w);
  RationalVector v;
  for (const auto& fi : f) v.push_back(scale * eval_at_origin(fi));
  return v;
}

// --- Taylor route ---------------------------------------------------------

namespace {

using SeriesVector = std::vector<TruncatedSeries>;

}  // namespace

SeriesTable series_up_to(const ControlSystem& sys, int max_order) {
  if (max_order < 1) throw InputError("series_up_to: max order must be >= 1");
  const int n = sys.n;
  const int vars = n + 1;
  const int top = max_order - 1;  // Taylor degree needed for order-1 words

  SeriesVector a, b;
  for (int i = 0; i < n; ++i) {
    a.push_back(to_series(sys.a[i], vars, top));
    b.push_back(to_series(sys.b[i], vars, top));
  }
  // Partial derivatives of the drift, da[i][k] = d a_i / d x_{k+1}.
  std::vector<SeriesVector> da(n);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) da[i].push_back(a[i].derivative(k + 1));
  }

  // Vector fields of ad^j R_a R_b: c_{j+1} = dt c_j + (dx c_j) a - (dx a) c_j.
  std::vector<SeriesVector> fields{b};
  for (int j = 0; j + 1 < max_order; ++j) {
    const SeriesVector& c = fields.back();
    const int deg = top - j - 1;
    SeriesVector next;
    for (int i = 0; i < n; ++i) {
      TruncatedSeries s = c[i].derivative(0).truncated(deg);
      for (int k = 0; k < n; ++k) {
        if (!a[k].is_zero()) s += c[i].derivative(k + 1) * a[k];
        if (!da[i][k].is_zero() && !c[k].is_zero()) s -= da[i][k] * c[k];
      }
      next.push_back(s.truncated(deg));
    }
    fields.push_back(std::move(next));
  }

  SeriesTable table;
  table.n = n;
  table.max_order = max_order;

  // chain[w] = ad^{m1} R_b ... ad^{mk} R_b E, truncated at degree max_order - ord(w).
  std::unordered_map<Word, SeriesVector, WordHash> chain;
  for (int m = 0; m < max_order; ++m) {
    SeriesVector c = fields[m];
    for (auto& s : c) s = s.truncated(max_order - m - 1);
    chain.emplace(Word{m}, std::move(c));
  }

  for (int order = 1; order <= max_order; ++order) {
    for (const Word& w : enumerate_basis(order)) {
      auto it = chain.find(w);
      if (it == chain.end()) throw InternalError("series_up_to: missing operator chain for " + w.to_string());
      const SeriesVector& f = it->second;

      RationalVector v(n);
      const Rational scale = word_scale(w);
      for (int i = 0; i < n; ++i) v[i] = scale * f[i].constant_term();
      table.coeffs.emplace(w, std::move(v));

      if (order == max_order) continue;
      // Extend by one more operator on the left: ad^{m} R_b g = (dx g) c_m.
      std::vector<SeriesVector> grad(n);
      for (int i = 0; i < n; ++i) {
        for (int k = 0; k < n; ++k) grad[i].push_back(f[i].derivative(k + 1));
      }
      for (int m = 0; order + m + 1 <= max_order; ++m) {
        const int deg = max_order - (order + m + 1);
        const SeriesVector& c = fields[m];
        SeriesVector g;
        for (int i = 0; i < n; ++i) {
          TruncatedSeries s(vars, deg);
          for (int k = 0; k < n; ++k) {
            if (!grad[i][k].is_zero() && !c[k].is_zero()) {
              s += grad[i][k].truncated(deg) * c[k].truncated(deg);
            }
          }
          g.push_back(s.truncated(deg));
        }
        chain.emplace(w.prepend(m), std::move(g));
      }
      chain.erase(it);
    }
  }
  return table;
}

RationalVector lie_coefficient(const SeriesTable& table, const LieBasisElement& g) {
  if (g.order > table.max_order) {
    throw InputError("lie_coefficient: element of order " + std::to_string(g.order) + " exceeds table order " +
                     std::to_string(table.max_order));
  }
  return table.apply(g.expansion);
}

}  // namespace homapprox
