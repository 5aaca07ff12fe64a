#include "branchwalk/rational.hpp"

#include <cctype>

namespace branchwalk {

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

// cpp_int honors leading-zero octal prefixes; parse digit strings as decimal
BigInt decimal_bigint(std::string digits) {
    size_t nz = digits.find_first_not_of('0');
    return BigInt(nz == std::string::npos ? "0" : digits.substr(nz));
}

}  // namespace

Rational parse_rational(std::string_view text) {
    std::string s(text);
    // strip surrounding whitespace
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(s.begin());
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
    if (s.empty()) throw std::invalid_argument("empty rational literal");

    bool negative = false;
    if (s.front() == '+' || s.front() == '-') {
        negative = s.front() == '-';
        s.erase(s.begin());
    }
    if (s.empty()) throw std::invalid_argument("sign-only rational literal");

    auto fail = [&] { throw std::invalid_argument("bad rational literal: '" + std::string(text) + "'"); };

    Rational value;
    if (auto slash = s.find('/'); slash != std::string::npos) {
        std::string num = s.substr(0, slash), den = s.substr(slash + 1);
        if (!all_digits(num) || !all_digits(den)) fail();
        BigInt d = decimal_bigint(den);
        if (d == 0) fail();
        value = Rational(decimal_bigint(num), d);
    } else {
        // decimal with optional exponent
        int exp10 = 0;
        if (auto e = s.find_first_of("eE"); e != std::string::npos) {
            std::string tail = s.substr(e + 1);
            s = s.substr(0, e);
            bool eneg = false;
            if (!tail.empty() && (tail.front() == '+' || tail.front() == '-')) {
                eneg = tail.front() == '-';
                tail.erase(tail.begin());
            }
            if (!all_digits(tail) || tail.size() > 6) fail();
            exp10 = std::stoi(tail);
            if (eneg) exp10 = -exp10;
        }
        std::string digits = s;
        int frac_len = 0;
        if (auto dot = s.find('.'); dot != std::string::npos) {
            digits = s.substr(0, dot) + s.substr(dot + 1);
            frac_len = static_cast<int>(s.size() - dot - 1);
        }
        if (!all_digits(digits)) fail();
        value = Rational(decimal_bigint(digits));
        int shift = exp10 - frac_len;
        if (shift > 0)
            value *= rational_pow(Rational(10), shift);
        else if (shift < 0)
            value /= rational_pow(Rational(10), -shift);
    }
    return negative ? -value : value;
}

std::string rational_to_string(const Rational& r) {
    std::string num = numerator(r).str();
    if (denominator(r) == 1) return num;
    return num + "/" + denominator(r).str();
}

}  // namespace branchwalk
