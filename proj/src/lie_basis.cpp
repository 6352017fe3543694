#include "homapprox/lie_basis.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>

#include <json.hpp>

#include "homapprox/error.hpp"
#include "homapprox/linalg.hpp"

namespace homapprox {

namespace {

std::string bracket_text(const Word& w, std::size_t from, bool latex) {
  auto gen = [&](int letter) {
    return latex ? "\\xi_{" + std::to_string(letter) + "}" : "xi_" + std::to_string(letter);
  };
  if (from + 1 == w.length()) return gen(w[from]);
  return "[" + gen(w[from]) + ", " + bracket_text(w, from + 1, latex) + "]";
}

int mobius(int d) {
  int result = 1;
  for (int p = 2; p * p <= d; ++p) {
    if (d % p == 0) {
      d /= p;
      if (d % p == 0) return 0;
      result = -result;
    }
  }
  if (d > 1) result = -result;
  return result;
}

}  // namespace

std::string LieBasisElement::bracket_string() const { return bracket_text(word, 0, false); }
std::string LieBasisElement::bracket_latex() const { return bracket_text(word, 0, true); }

AlgElem expand_right_normed(const Word& w) {
  if (w.empty()) throw InputError("expand_right_normed: empty word");
  AlgElem head = AlgElem::word(w.prefix(1));
  if (w.length() == 1) return head;
  AlgElem rest = expand_right_normed(w.suffix(1));
  return concat(head, rest) - concat(rest, head);
}

std::int64_t witt_dimension(int m) {
  if (m < 1) throw InputError("witt_dimension: order must be >= 1");
  if (m == 1) return 1;
  std::int64_t sum = 0;
  for (int d = 1; d <= m; ++d) {
    if (m % d == 0) sum += mobius(d) * (std::int64_t{1} << (m / d));
  }
  return sum / m;
}

std::vector<Word> candidate_order(int m, int k) {
  std::vector<Word> words;
  for (const Word& w : enumerate_basis(m)) {
    if (static_cast<int>(w.length()) == k) words.push_back(w);
  }
  std::stable_sort(words.begin(), words.end(), [](const Word& a, const Word& b) {
    if (a.first() != b.first()) return a.first() < b.first();
    return b.suffix(1) < a.suffix(1);
  });
  return words;
}

std::vector<LieBasisElement> build_lie_basis(int max_order) {
  if (max_order < 1) throw InputError("build_lie_basis: max order must be >= 1");
  std::vector<LieBasisElement> basis;
  for (int m = 1; m <= max_order; ++m) {
    for (int k = 1; k <= m; ++k) {
      // Each (order, length) block has its own support, so independence is
      // decided block by block.
      RowEchelon echelon;
      for (const Word& w : candidate_order(m, k)) {
        if (k >= 2 && w[k - 2] == w[k - 1]) continue;  // [a, a] = 0
        AlgElem e = expand_right_normed(w);
        if (e.is_zero()) continue;
        if (!echelon.insert(vectorize_sparse(e, m))) continue;
        LieBasisElement g;
        g.word = w;
        g.expansion = std::move(e);
        g.order = m;
        g.length = k;
        g.index = basis.size();
        basis.push_back(std::move(g));
      }
    }
  }
  return basis;
}

// --- cache ----------------------------------------------------------------

namespace {

constexpr int kCacheVersion = 1;
constexpr const char* kCacheFormat = "homapprox-lie-basis";

std::filesystem::path cache_file(const std::filesystem::path& dir, int max_order) {
  return dir / ("lie_basis_v" + std::to_string(kCacheVersion) + "_N" + std::to_string(max_order) + ".json");
}

}  // namespace

void save_lie_basis(const std::vector<LieBasisElement>& basis, int max_order, const std::filesystem::path& file) {
  nlohmann::ordered_json doc;
  doc["format"] = kCacheFormat;
  doc["version"] = kCacheVersion;
  doc["max_order"] = max_order;
  nlohmann::ordered_json blocks = nlohmann::ordered_json::array();
  for (const auto& g : basis) {
    if (blocks.empty() || blocks.back()["order"] != g.order || blocks.back()["length"] != g.length) {
      nlohmann::ordered_json block;
      block["order"] = g.order;
      block["length"] = g.length;
      block["elements"] = nlohmann::ordered_json::array();
      blocks.push_back(std::move(block));
    }
    nlohmann::ordered_json terms = nlohmann::ordered_json::array();
    for (const auto& [w, c] : g.expansion.terms()) terms.push_back({w.letters(), to_string(c)});
    blocks.back()["elements"].push_back({{"word", g.word.letters()}, {"expansion", std::move(terms)}});
  }
  doc["blocks"] = std::move(blocks);
  std::filesystem::create_directories(file.parent_path().empty() ? "." : file.parent_path());
  std::ofstream out(file);
  if (!out) throw InputError("cannot write Lie basis cache " + file.string());
  out << doc.dump() << '\n';
}

std::optional<std::vector<LieBasisElement>> load_lie_basis(int max_order, const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) return std::nullopt;
  nlohmann::json doc = nlohmann::json::parse(in, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || doc.value("format", "") != kCacheFormat || doc.value("version", 0) != kCacheVersion ||
      doc.value("max_order", 0) != max_order) {
    return std::nullopt;
  }
  std::vector<LieBasisElement> basis;
  try {
    for (const auto& block : doc.at("blocks")) {
      for (const auto& el : block.at("elements")) {
        LieBasisElement g;
        g.word = Word(std::span<const int>(el.at("word").get<std::vector<int>>()));
        for (const auto& term : el.at("expansion")) {
          auto letters = term.at(0).get<std::vector<int>>();
          g.expansion.add(Word(std::span<const int>(letters)), parse_rational(term.at(1).get<std::string>()));
        }
        g.order = block.at("order").get<int>();
        g.length = block.at("length").get<int>();
        g.index = basis.size();
        basis.push_back(std::move(g));
      }
    }
  } catch (const std::exception&) {
    return std::nullopt;
  }
  return basis;
}

std::vector<LieBasisElement> load_or_build_lie_basis(int max_order, std::optional<std::filesystem::path> cache_dir) {
  if (!cache_dir) {
    if (const char* env = std::getenv("HOMAPPROX_CACHE_DIR"); env && *env) cache_dir = env;
  }
  if (!cache_dir) return build_lie_basis(max_order);
  auto file = cache_file(*cache_dir, max_order);
  if (auto cached = load_lie_basis(max_order, file)) return std::move(*cached);
  auto basis = build_lie_basis(max_order);
  try {
    save_lie_basis(basis, max_order, file);
  } catch (const std::exception&) {
    // An unwritable cache only costs a rebuild next time.
  }
  return basis;
}

}  // namespace homapprox
