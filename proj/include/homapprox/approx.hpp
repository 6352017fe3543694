#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "homapprox/algebra.hpp"
#include "homapprox/lie_basis.hpp"
#include "homapprox/linalg.hpp"
#include "homapprox/polynomial.hpp"
#include "homapprox/series.hpp"

namespace homapprox {

// A Lie element built from the basis: g_source + sum c * g_k.
struct CoreElement {
  std::size_t source = 0;                                     // basis index of g
  std::vector<std::pair<std::size_t, Rational>> correction;   // (basis index, c)
  AlgElem element;
  int order = 0;
  RationalVector v;

  // "g_7 + 6*g_6" with 1-based labels.
  std::string label() const;
};

struct CoreDecomposition {
  std::vector<CoreElement> ell;   // n elements, orders non-decreasing
  std::vector<CoreElement> dees;  // every other processed basis element, corrected
  std::vector<int> orders() const;
};

// Rows d_j * z of order m spanning the right ideal in A^m; independent.
struct IdealBlock {
  int order = 0;
  std::vector<AlgElem> rows;
  std::vector<SparseVector> vectors;

  std::size_t rank() const { return rows.size(); }
  RationalMatrix matrix() const;
};

struct Projection {
  std::vector<AlgElem> ell_tilde;
  std::vector<int> orders;
};

// Exponent multi-index (q_1, ..., q_r) -> coefficient.
struct ShufflePolynomial {
  std::map<std::vector<int>, Rational> terms;
};

// x' = a_hat(t, x) + b_hat(t, x) u.
struct PolynomialSystem {
  int n = 0;
  std::vector<Polynomial> a_hat;
  std::vector<Polynomial> b_hat;

  ControlSystem to_control_system() const;
  nlohmann::ordered_json to_json() const;
  bool operator==(const PolynomialSystem&) const = default;
};

struct NoAutonomousApproximation {
  int index = 0;          // 1-based i of the offending element
  std::string component;  // "ell_tilde", "phi" or "psi"
  AlgElem witness;        // the element that is not a shuffle polynomial
};

using AutonomousOutcome = std::variant<PolynomialSystem, NoAutonomousApproximation>;

// Splits the basis into n elements with independent v-images and the
// corrected remainder. Throws NotAccessibleError when the basis runs out first.
CoreDecomposition select_core(const SeriesTable& table, const std::vector<LieBasisElement>& basis, int n);

// One block per distinct order among the ell's.
std::map<int, IdealBlock> build_ideal_blocks(const CoreDecomposition& core);

// Orthogonal projection of each ell onto the complement of its ideal block:
// through the normal equations J J^T x = J ell, or through a basis of the
// complement when that is the smaller system.
Projection project(const CoreDecomposition& core, const std::map<int, IdealBlock>& blocks);

// Writes y (homogeneous of order m) as a combination of shuffle monomials
// e_1^q_1 * ... * e_r^q_r with sum w_i q_i = m. Throws NotRepresentableError.
ShufflePolynomial express_as_shuffle_poly(const AlgElem& y, const std::vector<std::pair<AlgElem, int>>& basis_elems,
                                          int m);

// l = sum_j y_j xi_j + alpha xi_{w-1}: words of length >= 2 are split on their
// last letter j (y_j collects the prefixes), length-1 words give alpha.
struct LastLetterSplit {
  Rational alpha;
  std::map<int, AlgElem> prefixes;
};
LastLetterSplit split_by_last_letter(const AlgElem& l);

PolynomialSystem build_nonautonomous(const Projection& proj);
AutonomousOutcome build_autonomous(const Projection& proj);

struct PipelineOptions {
  // Fixed order; without it the order is deepened from n up to max_order_cap.
  std::optional<int> max_order;
  int max_order_cap = 13;
  std::optional<std::filesystem::path> cache_dir;
};

struct ApproximationResult {
  int n = 0;
  int max_order = 0;
  SeriesTable series;
  std::vector<LieBasisElement> basis;
  CoreDecomposition core;
  std::map<int, IdealBlock> blocks;
  Projection projection;
  PolynomialSystem nonautonomous;
  AutonomousOutcome autonomous;

  nlohmann::ordered_json to_json() const;
};

ApproximationResult approximate(const ControlSystem& sys, const PipelineOptions& options = {});

// Component k of the series of sys (v_w[k] over all words of the table).
AlgElem series_component(const SeriesTable& table, int k);

}  // namespace homapprox
