#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "homapprox/algebra.hpp"

namespace homapprox {

// A kept right-normed bracket [xi_{m1}, [xi_{m2}, ... [xi_{m(k-1)}, xi_{mk}]...]].
struct LieBasisElement {
  Word word;
  AlgElem expansion;
  int order = 0;
  int length = 0;
  std::size_t index = 0;  // 0-based position in the global list (g_{index+1})

  // "[xi_0, [xi_1, xi_0]]"
  std::string bracket_string() const;
  std::string bracket_latex() const;
};

// Right-normed bracket of w expanded in the free associative algebra.
AlgElem expand_right_normed(const Word& w);

// Graded basis of the free Lie algebra up to order max_order, sorted by order.
// Within each block of fixed order and length the candidates are tried in
// candidate_order() and kept when independent of those already kept.
std::vector<LieBasisElement> build_lie_basis(int max_order);

// Dimension of the degree-m component of the free Lie algebra on the
// generators xi_0, xi_1, ... graded by order (1 for m = 1).
std::int64_t witt_dimension(int m);

// Candidate words of order m and length k in the order they are offered to
// the independence filter: first letter ascending, remaining letters
// lexicographically descending.
std::vector<Word> candidate_order(int m, int k);

// Versioned JSON cache. The directory defaults to $HOMAPPROX_CACHE_DIR; with
// neither set, load_or_build_lie_basis just builds.
void save_lie_basis(const std::vector<LieBasisElement>& basis, int max_order,
                    const std::filesystem::path& file);
std::optional<std::vector<LieBasisElement>> load_lie_basis(int max_order, const std::filesystem::path& file);
std::vector<LieBasisElement> load_or_build_lie_basis(int max_order,
                                                     std::optional<std::filesystem::path> cache_dir = std::nullopt);

}  // namespace homapprox
