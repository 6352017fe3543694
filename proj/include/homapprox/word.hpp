#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace homapprox {

// Index sequence (m1, ..., mk) of the nonlinear power moment xi_{m1...mk}.
// order = m1 + ... + mk + k. The empty word is the algebra unit; it only
// appears transiently (see AlgElem::scalar()).
//
// Words compare in the canonical order: shorter first, then lexicographic.
class Word {
 public:
  static constexpr std::size_t kMaxLength = 31;

  Word() = default;
  Word(std::initializer_list<int> letters);
  explicit Word(std::span<const int> letters);

  std::size_t length() const { return length_; }
  bool empty() const { return length_ == 0; }
  int operator[](std::size_t i) const { return letters_[i]; }
  int first() const { return letters_[0]; }
  int last() const { return letters_[length_ - 1]; }
  int order() const;

  std::vector<int> letters() const { return {letters_.begin(), letters_.begin() + length_}; }

  // Letters [from, from + count).
  Word slice(std::size_t from, std::size_t count) const;
  Word suffix(std::size_t from) const { return slice(from, length_ - from); }
  Word prefix(std::size_t count) const { return slice(0, count); }
  Word with_letter(std::size_t i, int letter) const;

  void push_back(int letter);
  Word concat(const Word& other) const;
  Word prepend(int letter) const;

  // "xi_{0 1 0}"; the unit renders as "1".
  std::string to_string() const;
  // "\xi_{010}", with commas when some letter has several digits.
  std::string to_latex() const;

  std::size_t hash() const;

  bool operator==(const Word& other) const {
    return length_ == other.length_ && std::memcmp(letters_.data(), other.letters_.data(), length_) == 0;
  }
  std::strong_ordering operator<=>(const Word& other) const {
    if (length_ != other.length_) return length_ <=> other.length_;
    int c = std::memcmp(letters_.data(), other.letters_.data(), length_);
    return c <=> 0;
  }

 private:
  std::array<std::uint8_t, kMaxLength> letters_{};
  std::uint8_t length_ = 0;
};

struct WordHash {
  std::size_t operator()(const Word& w) const { return w.hash(); }
};

}  // namespace homapprox
