#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "homapprox/rational.hpp"

namespace homapprox {

// Sorted (column, value) pairs without zeros.
using SparseVector = std::vector<std::pair<std::size_t, Rational>>;
using RationalMatrix = std::vector<RationalVector>;

SparseVector to_sparse(const RationalVector& v);
Rational dot(const SparseVector& a, const SparseVector& b);

// Incremental exact row echelon form over Q. Vectors are offered one at a
// time; independent ones are kept. With tracking enabled, every dependent
// vector can be written as a combination of the kept ones.
class RowEchelon {
 public:
  explicit RowEchelon(bool track_combinations = false) : track_(track_combinations) {}

  // Returns true and keeps v if it is independent of the kept vectors.
  bool insert(const SparseVector& v);
  bool insert(const RationalVector& v) { return insert(to_sparse(v)); }

  bool contains(const SparseVector& v) const;
  bool contains(const RationalVector& v) const { return contains(to_sparse(v)); }

  // Coefficients c with v = sum_j c[j] * kept[j], or nullopt if v is not in
  // the span. Requires tracking.
  std::optional<RationalVector> coordinates(const SparseVector& v) const;
  std::optional<RationalVector> coordinates(const RationalVector& v) const {
    return coordinates(to_sparse(v));
  }

  std::size_t rank() const { return rows_.size(); }

 private:
  struct Row {
    SparseVector entries;  // leading entry is 1 at `pivot`
    std::size_t pivot;
    RationalVector combination;
  };

  // Reduces v in place against the stored rows; returns the multipliers
  // applied to each row.
  std::vector<std::pair<std::size_t, Rational>> reduce(std::map<std::size_t, Rational>& v) const;

  bool track_;
  std::vector<Row> rows_;
  std::map<std::size_t, std::size_t> pivot_row_;
};

// Basis of {x in Q^cols : r . x = 0 for every row r}, one vector per
// non-pivot column of the reduced row echelon form.
std::vector<SparseVector> nullspace(const std::vector<SparseVector>& rows, std::size_t cols);

// Solves A x = b for square nonsingular A by fraction-free elimination.
// Throws InternalError if A is singular.
RationalVector solve_square(const RationalMatrix& a, const RationalVector& b);

}  // namespace homapprox
