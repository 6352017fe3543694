#include "homapprox/linalg.hpp"

#include "homapprox/error.hpp"

namespace homapprox {

SparseVector to_sparse(const RationalVector& v) {
  SparseVector out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] != 0) out.emplace_back(i, v[i]);
  }
  return out;
}

Rational dot(const SparseVector& a, const SparseVector& b) {
  Rational s = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (i->first < j->first) {
      ++i;
    } else if (j->first < i->first) {
      ++j;
    } else {
      s += i->second * j->second;
      ++i;
      ++j;
    }
  }
  return s;
}

std::vector<std::pair<std::size_t, Rational>> RowEchelon::reduce(std::map<std::size_t, Rational>& v) const {
  std::vector<std::pair<std::size_t, Rational>> multipliers;
  auto it = v.begin();
  while (it != v.end()) {
    auto p = pivot_row_.find(it->first);
    if (p == pivot_row_.end()) {
      ++it;
      continue;
    }
    const Row& row = rows_[p->second];
    const Rational factor = it->second;
    const std::size_t col = it->first;
    for (const auto& [c, x] : row.entries) {
      auto [slot, inserted] = v.try_emplace(c, 0);
      slot->second -= factor * x;
      if (slot->second == 0) v.erase(slot);
    }
    multipliers.emplace_back(p->second, factor);
    it = v.upper_bound(col);
  }
  return multipliers;
}

bool RowEchelon::insert(const SparseVector& vec) {
  std::map<std::size_t, Rational> v(vec.begin(), vec.end());
  auto multipliers = reduce(v);
  if (v.empty()) return false;

  Row row;
  row.pivot = v.begin()->first;
  const Rational lead = v.begin()->second;
  row.entries.reserve(v.size());
  for (const auto& [c, x] : v) row.entries.emplace_back(c, x / lead);
  if (track_) {
    // row = (vec - sum factor_r * row_r) / lead, expressed in kept vectors.
    const std::size_t kept = rows_.size();
    row.combination.assign(kept + 1, Rational(0));
    row.combination[kept] = 1;
    for (const auto& [r, factor] : multipliers) {
      const auto& comb = rows_[r].combination;
      for (std::size_t j = 0; j < comb.size(); ++j) row.combination[j] -= factor * comb[j];
    }
    for (auto& c : row.combination) c /= lead;
    for (auto& other : rows_) other.combination.resize(kept + 1);
  }
  pivot_row_[row.pivot] = rows_.size();
  rows_.push_back(std::move(row));
  return true;
}

bool RowEchelon::contains(const SparseVector& vec) const {
  std::map<std::size_t, Rational> v(vec.begin(), vec.end());
  reduce(v);
  return v.empty();
}

std::optional<RationalVector> RowEchelon::coordinates(const SparseVector& vec) const {
  if (!track_) throw InternalError("RowEchelon::coordinates requires tracking");
  std::map<std::size_t, Rational> v(vec.begin(), vec.end());
  auto multipliers = reduce(v);
  if (!v.empty()) return std::nullopt;
  RationalVector coords(rows_.size(), Rational(0));
  for (const auto& [r, factor] : multipliers) {
    const auto& comb = rows_[r].combination;
    for (std::size_t j = 0; j < comb.size(); ++j) coords[j] += factor * comb[j];
  }
  return coords;
}

std::vector<SparseVector> nullspace(const std::vector<SparseVector>& rows, std::size_t cols) {
  using Row = std::map<std::size_t, Rational>;
  std::vector<Row> reduced;
  std::map<std::size_t, std::size_t> pivot_of;  // column -> index into reduced

  for (const auto& input : rows) {
    Row v(input.begin(), input.end());
    for (auto it = v.begin(); it != v.end();) {
      auto p = pivot_of.find(it->first);
      if (p == pivot_of.end()) {
        ++it;
        continue;
      }
      const std::size_t col = it->first;
      const Rational factor = it->second;
      for (const auto& [c, x] : reduced[p->second]) {
        auto [slot, inserted] = v.try_emplace(c, 0);
        slot->second -= factor * x;
        if (slot->second == 0) v.erase(slot);
      }
      it = v.upper_bound(col);
    }
    if (v.empty()) continue;

    const std::size_t pivot = v.begin()->first;
    const Rational lead = v.begin()->second;
    for (auto& [c, x] : v) x /= lead;
    for (auto& other : reduced) {
      auto hit = other.find(pivot);
      if (hit == other.end()) continue;
      const Rational factor = hit->second;
      for (const auto& [c, x] : v) {
        auto [slot, inserted] = other.try_emplace(c, 0);
        slot->second -= factor * x;
        if (slot->second == 0) other.erase(slot);
      }
    }
    pivot_of.emplace(pivot, reduced.size());
    reduced.push_back(std::move(v));
  }

  std::vector<SparseVector> basis;
  for (std::size_t free = 0; free < cols; ++free) {
    if (pivot_of.count(free)) continue;
    std::map<std::size_t, Rational> x{{free, Rational(1)}};
    for (const auto& [pivot, r] : pivot_of) {
      auto hit = reduced[r].find(free);
      if (hit != reduced[r].end()) x.emplace(pivot, -hit->second);
    }
    basis.emplace_back(x.begin(), x.end());
  }
  return basis;
}

RationalVector solve_square(const RationalMatrix& a, const RationalVector& b) {
  const std::size_t n = a.size();
  if (b.size() != n) throw InternalError("solve_square: dimension mismatch");
  // Clear denominators row by row, then Bareiss elimination over Z.
  std::vector<std::vector<mpz_class>> m(n, std::vector<mpz_class>(n + 1));
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i].size() != n) throw InternalError("solve_square: matrix is not square");
    mpz_class l = b[i].get_den();
    for (const auto& x : a[i]) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den().get_mpz_t());
    for (std::size_t j = 0; j < n; ++j) m[i][j] = a[i][j].get_num() * (l / a[i][j].get_den());
    m[i][n] = b[i].get_num() * (l / b[i].get_den());
  }
  mpz_class prev = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    while (p < n && m[p][k] == 0) ++p;
    if (p == n) throw InternalError("solve_square: singular matrix");
    if (p != k) std::swap(m[p], m[k]);
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j <= n; ++j) {
        m[i][j] = (m[k][k] * m[i][j] - m[i][k] * m[k][j]);
        mpz_divexact(m[i][j].get_mpz_t(), m[i][j].get_mpz_t(), prev.get_mpz_t());
      }
      m[i][k] = 0;
    }
    prev = m[k][k];
  }
  RationalVector x(n);
  for (std::size_t ii = n; ii-- > 0;) {
    Rational s(m[ii][n]);
    for (std::size_t j = ii + 1; j < n; ++j) s -= Rational(m[ii][j]) * x[j];
    x[ii] = s / Rational(m[ii][ii]);
  }
  return x;
}

}  // namespace homapprox
