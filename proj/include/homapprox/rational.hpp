#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <vector>

namespace homapprox {

// Arbitrary-precision rational, always canonical (lowest terms, positive
// denominator).
using Rational = mpq_class;
using RationalVector = std::vector<Rational>;

// "p/q", or "p" when the denominator is one.
std::string to_string(const Rational& q);

// Accepts "p", "p/q", "-p/q" and decimals such as "0.25" or "-3.5".
Rational parse_rational(std::string_view text);

// \frac{p}{q} with the sign pulled in front.
std::string to_latex(const Rational& q);

bool is_zero(const RationalVector& v);

std::string to_string(const RationalVector& v);

}  // namespace homapprox
