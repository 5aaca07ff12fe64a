#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>
#include <string_view>

namespace branchwalk {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

inline Rational rational_pow(const Rational& base, int exp) {
    if (exp == 0) return Rational(1);
    Rational b = exp > 0 ? base : Rational(1) / base;
    int e = exp > 0 ? exp : -exp;
    Rational out(1);
    while (e > 0) {
        if (e & 1) out *= b;
        b *= b;
        e >>= 1;
    }
    return out;
}

// Accepts "p/q", integers, and (optionally signed) decimal strings such as
// "0.25" or "-1.5e-3". Decimals are converted exactly.
Rational parse_rational(std::string_view text);

// Canonical form: "p" when the denominator is 1, otherwise "p/q".
std::string rational_to_string(const Rational& r);

}  // namespace branchwalk
