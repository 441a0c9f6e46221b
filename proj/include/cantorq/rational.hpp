#ifndef CANTORQ_RATIONAL_HPP
#define CANTORQ_RATIONAL_HPP

#include <boost/multiprecision/gmp.hpp>

#include <cctype>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace cantorq {

using BigInt = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;

inline Rational make_rational(const BigInt& num, const BigInt& den = 1) {
    if (den == 0) throw std::domain_error("rational with zero denominator");
    return Rational(num, den);
}

inline BigInt numerator_of(const Rational& q) { return boost::multiprecision::numerator(q); }
inline BigInt denominator_of(const Rational& q) { return boost::multiprecision::denominator(q); }

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

inline long double to_long_double(const Rational& q) {
    // mpq_get_d stops at 53 bits; scale the integer quotient to keep all 64.
    BigInt num = numerator_of(q);
    if (num == 0) return 0.0L;
    const bool neg = num < 0;
    if (neg) num = -num;
    const BigInt& den = denominator_of(q);
    const long shift = 63 + static_cast<long>(boost::multiprecision::msb(den)) -
                       static_cast<long>(boost::multiprecision::msb(num));
    BigInt scaled = shift >= 0 ? BigInt((num << static_cast<unsigned>(shift)) / den)
                               : BigInt(num / (den << static_cast<unsigned>(-shift)));
    // scaled < 2^64, so the integer conversion and the long double are both exact.
    const auto bits = scaled.convert_to<unsigned long long>();
    long double r = std::ldexp(static_cast<long double>(bits), static_cast<int>(-shift));
    return neg ? -r : r;
}

inline BigInt pow_int(long base, unsigned exp) {
    BigInt result = 1;
    BigInt b = base;
    while (exp) {
        if (exp & 1u) result *= b;
        b *= b;
        exp >>= 1;
    }
    return result;
}

inline std::string to_string(const Rational& q) {
    if (denominator_of(q) == 1) return numerator_of(q).str();
    return numerator_of(q).str() + "/" + denominator_of(q).str();
}

namespace detail {

// Boost reads a leading 0 as an octal prefix.
inline BigInt from_digits(std::string_view digits) {
    const auto nz = digits.find_first_not_of('0');
    return nz == std::string_view::npos ? BigInt(0) : BigInt(std::string(digits.substr(nz)));
}

inline BigInt parse_integer(std::string_view s, std::string_view whole) {
    if (s.empty()) throw std::invalid_argument("malformed rational: '" + std::string(whole) + "'");
    std::size_t i = 0;
    bool neg = false;
    if (s[0] == '+' || s[0] == '-') {
        neg = s[0] == '-';
        i = 1;
    }
    if (i == s.size()) throw std::invalid_argument("malformed rational: '" + std::string(whole) + "'");
    for (std::size_t k = i; k < s.size(); ++k)
        if (!std::isdigit(static_cast<unsigned char>(s[k])))
            throw std::invalid_argument("malformed rational: '" + std::string(whole) + "'");
    BigInt v = from_digits(s.substr(i));
    return neg ? BigInt(-v) : v;
}

inline Rational parse_decimal(std::string_view s, std::string_view whole) {
    auto bad = [&] { return std::invalid_argument("malformed rational: '" + std::string(whole) + "'"); };
    std::string_view mant = s;
    long exp10 = 0;
    if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
        mant = s.substr(0, e);
        std::string_view ex = s.substr(e + 1);
        BigInt ev = parse_integer(ex, whole);
        if (boost::multiprecision::abs(ev) > 100000) throw bad();
        exp10 = ev.convert_to<long>();
    }
    bool neg = false;
    if (!mant.empty() && (mant[0] == '+' || mant[0] == '-')) {
        neg = mant[0] == '-';
        mant.remove_prefix(1);
    }
    auto dot = mant.find('.');
    std::string digits;
    long frac_len = 0;
    if (dot == std::string_view::npos) {
        digits = std::string(mant);
    } else {
        digits = std::string(mant.substr(0, dot)) + std::string(mant.substr(dot + 1));
        frac_len = static_cast<long>(mant.size() - dot - 1);
    }
    if (digits.empty()) throw bad();
    for (char c : digits)
        if (!std::isdigit(static_cast<unsigned char>(c))) throw bad();
    BigInt num = from_digits(digits);
    long shift = exp10 - frac_len;
    Rational q = shift >= 0 ? Rational(num * pow_int(10, static_cast<unsigned>(shift)))
                            : Rational(num, pow_int(10, static_cast<unsigned>(-shift)));
    return neg ? Rational(-q) : q;
}

}  // namespace detail

/// Parses "p/q", decimal ("0.125", "-3") and scientific ("1e-12") notation exactly.
inline Rational parse_rational(std::string_view text) {
    std::string_view s = text;
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    if (s.empty()) throw std::invalid_argument("empty rational");
    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        BigInt num = detail::parse_integer(s.substr(0, slash), text);
        BigInt den = detail::parse_integer(s.substr(slash + 1), text);
        if (den == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
        return Rational(num, den);
    }
    return detail::parse_decimal(s, text);
}

}  // namespace cantorq

#endif  // CANTORQ_RATIONAL_HPP
