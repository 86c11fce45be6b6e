#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

#include "formacalc/error.hpp"

namespace formacalc {

using Integer = boost::multiprecision::cpp_int;

/// Exact rational scalar. Always stored in canonical form: denominator > 0,
/// gcd(|num|, den) = 1. All arithmetic in the library is exact; there is no
/// floating point anywhere.
using Rational = boost::multiprecision::cpp_rational;

inline Rational rat(long long num, long long den = 1) {
    require(den != 0, "E_DOMAIN", "rational with zero denominator");
    return Rational(Integer(num), Integer(den));
}

inline Integer factorial(unsigned n) {
    Integer f = 1;
    for (unsigned i = 2; i <= n; ++i) f *= i;
    return f;
}

inline Integer binomial(unsigned n, unsigned k) {
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    Integer b = 1;
    for (unsigned i = 0; i < k; ++i) {
        b *= (n - i);
        b /= (i + 1);
    }
    return b;
}

inline Rational pow(const Rational& base, unsigned e) {
    Rational r = 1;
    Rational b = base;
    while (e) {
        if (e & 1u) r *= b;
        b *= b;
        e >>= 1u;
    }
    return r;
}

/// Canonical text form "n" or "n/d" with d > 0.
inline std::string to_string(const Rational& r) {
    std::string s = numerator(r).str();
    if (denominator(r) != 1) s += "/" + denominator(r).str();
    return s;
}

} // namespace formacalc
