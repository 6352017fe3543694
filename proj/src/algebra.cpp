#include "homapprox/algebra.hpp"

#include <unordered_map>

#include "homapprox/error.hpp"

namespace homapprox {

// --- Word -----------------------------------------------------------------

Word::Word(std::initializer_list<int> letters) : Word(std::span<const int>(letters.begin(), letters.size())) {}

Word::Word(std::span<const int> letters) {
  for (int l : letters) push_back(l);
}

int Word::order() const {
  int s = length_;
  for (std::size_t i = 0; i < length_; ++i) s += letters_[i];
  return s;
}

Word Word::slice(std::size_t from, std::size_t count) const {
  Word w;
  std::memcpy(w.letters_.data(), letters_.data() + from, count);
  w.length_ = static_cast<std::uint8_t>(count);
  return w;
}

Word Word::with_letter(std::size_t i, int letter) const {
  Word w = *this;
  w.letters_[i] = static_cast<std::uint8_t>(letter);
  return w;
}

void Word::push_back(int letter) {
  if (length_ >= kMaxLength) throw InputError("word longer than " + std::to_string(kMaxLength) + " letters");
  if (letter < 0 || letter > 255) throw InputError("word letter out of range: " + std::to_string(letter));
  letters_[length_++] = static_cast<std::uint8_t>(letter);
}

Word Word::concat(const Word& other) const {
  if (length_ + other.length_ > kMaxLength) {
    throw InputError("word longer than " + std::to_string(kMaxLength) + " letters");
  }
  Word w = *this;
  std::memcpy(w.letters_.data() + length_, other.letters_.data(), other.length_);
  w.length_ = static_cast<std::uint8_t>(length_ + other.length_);
  return w;
}

Word Word::prepend(int letter) const {
  Word w;
  w.push_back(letter);
  return w.concat(*this);
}

std::string Word::to_string() const {
  if (empty()) return "1";
  std::string out = "xi_{";
  for (std::size_t i = 0; i < length_; ++i) {
    if (i) out += ' ';
    out += std::to_string(letters_[i]);
  }
  return out + "}";
}

std::string Word::to_latex() const {
  if (empty()) return "1";
  bool wide = false;
  for (std::size_t i = 0; i < length_; ++i) wide = wide || letters_[i] > 9;
  std::string out = "\\xi_{";
  for (std::size_t i = 0; i < length_; ++i) {
    if (i && wide) out += ',';
    out += std::to_string(letters_[i]);
  }
  return out + "}";
}

std::size_t Word::hash() const {
  // FNV-1a over the used bytes.
  std::uint64_t h = 1469598103934665603ull ^ length_;
  for (std::size_t i = 0; i < length_; ++i) {
    h ^= letters_[i];
    h *= 1099511628211ull;
  }
  return static_cast<std::size_t>(h);
}

// --- AlgElem --------------------------------------------------------------

AlgElem AlgElem::word(const Word& w, const Rational& coefficient) {
  AlgElem e;
  e.add(w, coefficient);
  return e;
}

AlgElem AlgElem::scalar(const Rational& value) { return word(Word{}, value); }

Rational AlgElem::coefficient(const Word& w) const {
  auto it = terms_.find(w);
  return it == terms_.end() ? Rational(0) : it->second;
}

void AlgElem::add(const Word& w, const Rational& coefficient) {
  if (coefficient == 0) return;
  auto [it, inserted] = terms_.try_emplace(w, coefficient);
  if (!inserted) {
    it->second += coefficient;
    if (it->second == 0) terms_.erase(it);
  }
}

bool AlgElem::is_homogeneous(int m) const {
  for (const auto& [w, c] : terms_) {
    if (w.order() != m) return false;
  }
  return true;
}

std::optional<int> AlgElem::order() const {
  if (terms_.empty()) return std::nullopt;
  int m = terms_.begin()->first.order();
  return is_homogeneous(m) ? std::optional<int>(m) : std::nullopt;
}

AlgElem& AlgElem::operator+=(const AlgElem& other) {
  for (const auto& [w, c] : other.terms_) add(w, c);
  return *this;
}

AlgElem& AlgElem::operator-=(const AlgElem& other) {
  for (const auto& [w, c] : other.terms_) add(w, -c);
  return *this;
}

AlgElem& AlgElem::operator*=(const Rational& factor) {
  if (factor == 0) {
    terms_.clear();
  } else {
    for (auto& [w, c] : terms_) c *= factor;
  }
  return *this;
}

namespace {

template <class CoefFn, class WordFn>
std::string render(const AlgElem::Terms& terms, CoefFn coef, WordFn word, const char* times) {
  if (terms.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [w, c] : terms) {
    Rational mag = abs(c);
    if (first) {
      if (c < 0) out += "-";
    } else {
      out += c < 0 ? " - " : " + ";
    }
    first = false;
    if (w.empty()) {
      out += coef(mag);
    } else if (mag == 1) {
      out += word(w);
    } else {
      out += coef(mag) + times + word(w);
    }
  }
  return out;
}

}  // namespace

std::string AlgElem::to_string() const {
  return render(
      terms_, [](const Rational& q) { return homapprox::to_string(q); },
      [](const Word& w) { return w.to_string(); }, "*");
}

std::string AlgElem::to_latex() const {
  return render(
      terms_, [](const Rational& q) { return homapprox::to_latex(q); },
      [](const Word& w) { return w.to_latex(); }, "");
}

// --- graded basis ---------------------------------------------------------

namespace {

std::uint64_t binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  return r;
}

// Number of words of length k whose letters sum to s: C(s + k - 1, k - 1).
std::uint64_t compositions(int s, int k) {
  if (k == 0) return s == 0 ? 1 : 0;
  return binomial(s + k - 1, k - 1);
}

void enumerate_fixed_length(int k, int s, std::vector<int>& prefix, std::vector<Word>& out) {
  if (static_cast<int>(prefix.size()) == k - 1) {
    prefix.push_back(s);
    out.emplace_back(std::span<const int>(prefix));
    prefix.pop_back();
    return;
  }
  for (int v = 0; v <= s; ++v) {
    prefix.push_back(v);
    enumerate_fixed_length(k, s - v, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

std::size_t graded_dimension(int m) {
  if (m < 1) throw InputError("order must be >= 1");
  return std::size_t{1} << (m - 1);
}

std::vector<Word> enumerate_basis(int m) {
  if (m < 1) throw InputError("order must be >= 1");
  std::vector<Word> out;
  out.reserve(graded_dimension(m));
  std::vector<int> prefix;
  for (int k = 1; k <= m; ++k) enumerate_fixed_length(k, m - k, prefix, out);
  return out;
}

std::size_t basis_index(const Word& w) {
  const int m = w.order();
  const int k = static_cast<int>(w.length());
  std::uint64_t index = 0;
  for (int j = 1; j < k; ++j) index += compositions(m - j, j);
  int remaining = m - k;
  for (int i = 0; i + 1 < k; ++i) {
    const int slots = k - i - 1;
    for (int v = 0; v < w[i]; ++v) index += compositions(remaining - v, slots);
    remaining -= w[i];
  }
  return static_cast<std::size_t>(index);
}

RationalVector vectorize(const AlgElem& e, int m) {
  RationalVector v(graded_dimension(m));
  for (const auto& [w, c] : e.terms()) {
    if (w.order() != m) {
      throw InputError("vectorize: " + w.to_string() + " is not of order " + std::to_string(m));
    }
    v[basis_index(w)] = c;
  }
  return v;
}

std::vector<std::pair<std::size_t, Rational>> vectorize_sparse(const AlgElem& e, int m) {
  std::vector<std::pair<std::size_t, Rational>> v;
  v.reserve(e.size());
  for (const auto& [w, c] : e.terms()) {
    if (w.order() != m) {
      throw InputError("vectorize: " + w.to_string() + " is not of order " + std::to_string(m));
    }
    v.emplace_back(basis_index(w), c);
  }
  std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return v;
}

AlgElem devectorize(const RationalVector& v, int m) {
  if (v.size() != graded_dimension(m)) throw InputError("devectorize: length mismatch");
  std::vector<Word> words = enumerate_basis(m);
  AlgElem e;
  for (std::size_t i = 0; i < v.size(); ++i) e.add(words[i], v[i]);
  return e;
}

// --- products -------------------------------------------------------------

AlgElem concat(const AlgElem& a, const AlgElem& b) {
  AlgElem out;
  for (const auto& [u, cu] : a.terms()) {
    for (const auto& [v, cv] : b.terms()) out.add(u.concat(v), cu * cv);
  }
  return out;
}

namespace {

struct WordPairHash {
  std::size_t operator()(const std::pair<Word, Word>& p) const {
    return p.first.hash() * 31 + p.second.hash();
  }
};

using ShuffleMemo =
    std::unordered_map<std::pair<Word, Word>, std::vector<std::pair<Word, std::int64_t>>, WordPairHash>;

constexpr std::size_t kShuffleMemoLimit = 200000;

ShuffleMemo& shuffle_memo() {
  thread_local ShuffleMemo memo;
  return memo;
}

}  // namespace

const std::vector<std::pair<Word, std::int64_t>>& shuffle_words(const Word& u, const Word& v) {
  // Commutative, so key on the ordered pair.
  const bool swap = v < u;
  std::pair<Word, Word> key = swap ? std::make_pair(v, u) : std::make_pair(u, v);
  ShuffleMemo& memo = shuffle_memo();
  if (auto it = memo.find(key); it != memo.end()) return it->second;

  const Word& a = key.first;
  const Word& b = key.second;
  std::vector<std::pair<Word, std::int64_t>> result;
  if (a.empty()) {
    result.emplace_back(b, 1);
  } else if (b.empty()) {
    result.emplace_back(a, 1);
  } else {
    // a (x) b = a1 (a' (x) b) + b1 (a (x) b')
    std::map<Word, std::int64_t> acc;
    auto left = shuffle_words(a.suffix(1), b);
    for (const auto& [w, c] : left) acc[w.prepend(a.first())] += c;
    auto right = shuffle_words(a, b.suffix(1));
    for (const auto& [w, c] : right) acc[w.prepend(b.first())] += c;
    result.assign(acc.begin(), acc.end());
  }
  if (memo.size() >= kShuffleMemoLimit) memo.clear();
  return memo.emplace(std::move(key), std::move(result)).first->second;
}

AlgElem shuffle(const AlgElem& a, const AlgElem& b) {
  AlgElem out;
  for (const auto& [u, cu] : a.terms()) {
    for (const auto& [v, cv] : b.terms()) {
      Rational c = cu * cv;
      // Copy: the memo may be cleared by a later call.
      auto words = shuffle_words(u, v);
      for (const auto& [w, n] : words) out.add(w, c * Rational(n));
    }
  }
  return out;
}

AlgElem shuffle_power(const AlgElem& a, int q) {
  AlgElem out = AlgElem::scalar(1);
  for (int i = 0; i < q; ++i) out = shuffle(out, a);
  return out;
}

AlgElem phi(const AlgElem& e) {
  AlgElem out;
  for (const auto& [w, c] : e.terms()) {
    for (std::size_t i = 0; i < w.length(); ++i) {
      if (w[i] >= 1) out.add(w.with_letter(i, w[i] - 1), c * w[i]);
    }
  }
  return out;
}

AlgElem psi(const AlgElem& e) {
  AlgElem out;
  for (const auto& [w, c] : e.terms()) {
    if (!w.empty() && w.last() == 0) out.add(w.prefix(w.length() - 1), c);
  }
  return out;
}

Rational inner_product(const AlgElem& a, const AlgElem& b) {
  Rational s = 0;
  const AlgElem& small = a.size() <= b.size() ? a : b;
  const AlgElem& large = a.size() <= b.size() ? b : a;
  for (const auto& [w, c] : small.terms()) s += c * large.coefficient(w);
  return s;
}

}  // namespace homapprox
