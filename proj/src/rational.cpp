#include "homapprox/rational.hpp"

#include <algorithm>

#include "homapprox/error.hpp"

namespace homapprox {

std::string to_string(const Rational& q) {
  return q.get_str();
}

Rational parse_rational(std::string_view text) {
  if (text.empty()) throw InputError("empty rational literal");
  std::string s(text);
  bool negative = false;
  std::size_t pos = 0;
  if (s[0] == '-' || s[0] == '+') {
    negative = s[0] == '-';
    pos = 1;
  }
  std::string body = s.substr(pos);
  if (body.empty()) throw InputError("malformed rational literal '" + s + "'");
  Rational result;
  auto digits_only = [](const std::string& d) {
    return !d.empty() && std::all_of(d.begin(), d.end(), [](char c) { return c >= '0' && c <= '9'; });
  };
  if (auto slash = body.find('/'); slash != std::string::npos) {
    std::string num = body.substr(0, slash);
    std::string den = body.substr(slash + 1);
    if (!digits_only(num) || !digits_only(den)) throw InputError("malformed rational literal '" + s + "'");
    mpz_class d(den);
    if (d == 0) throw InputError("zero denominator in literal '" + s + "'");
    result = Rational(mpz_class(num), d);
  } else if (auto dot = body.find('.'); dot != std::string::npos) {
    std::string whole = body.substr(0, dot);
    std::string frac = body.substr(dot + 1);
    if (whole.empty()) whole = "0";
    if (!digits_only(whole) || (!frac.empty() && !digits_only(frac)))
      throw InputError("malformed decimal literal '" + s + "'");
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
    mpz_class num(whole + frac);
    result = Rational(num, scale);
  } else {
    if (!digits_only(body)) throw InputError("malformed integer literal '" + s + "'");
    result = Rational(mpz_class(body));
  }
  result.canonicalize();
  return negative ? Rational(-result) : result;
}

std::string to_latex(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  std::string sign = q < 0 ? "-" : "";
  mpz_class num = abs(q.get_num());
  return sign + "\\frac{" + num.get_str() + "}{" + q.get_den().get_str() + "}";
}

bool is_zero(const RationalVector& v) {
  return std::all_of(v.begin(), v.end(), [](const Rational& q) { return q == 0; });
}

std::string to_string(const RationalVector& v) {
  std::string out = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += to_string(v[i]);
  }
  return out + ")";
}

}  // namespace homapprox
