#pragma once

#include <boost/integer/mod_inverse.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>
#include <vector>

namespace repute {

using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Int powm(const Int& base, const Int& exp, const Int& mod) {
    return boost::multiprecision::powm(base, exp, mod);
}

// multiplicative inverse of a modulo m; throws when gcd(a, m) != 1
inline Int invmod(const Int& a, const Int& m) {
    Int r = boost::integer::mod_inverse(Int(a % m), m);
    if (r == 0) {
        throw std::domain_error("invmod: argument not invertible");
    }
    return r;
}

// powm that accepts negative exponents via inversion
inline Int powm_signed(const Int& base, const Int& exp, const Int& mod) {
    if (exp < 0) {
        return powm(invmod(base, mod), Int(-exp), mod);
    }
    return powm(base, exp, mod);
}

inline Int mulmod(const Int& a, const Int& b, const Int& mod) {
    return (a * b) % mod;
}

// canonical integer text form: minimal lowercase big-endian hex, "0" for zero
inline std::string to_hex(const Int& v) {
    if (v < 0) {
        throw std::invalid_argument("to_hex: negative value");
    }
    if (v == 0) {
        return "0";
    }
    static const char digits[] = "0123456789abcdef";
    std::string out;
    Int t = v;
    while (t > 0) {
        out.push_back(digits[static_cast<unsigned>(t & 0xf)]);
        t >>= 4;
    }
    std::reverse(out.begin(), out.end());
    return out;
}

inline Int from_hex(const std::string& s) {
    if (s.empty()) {
        throw std::invalid_argument("from_hex: empty string");
    }
    Int v = 0;
    for (char c : s) {
        int d;
        if (c >= '0' && c <= '9') {
            d = c - '0';
        } else if (c >= 'a' && c <= 'f') {
            d = c - 'a' + 10;
        } else {
            throw std::invalid_argument("from_hex: invalid digit");
        }
        v = (v << 4) | d;
    }
    return v;
}

inline std::vector<unsigned char> to_bytes(const Int& v) {
    std::vector<unsigned char> out;
    if (v == 0) {
        return out;
    }
    export_bits(v, std::back_inserter(out), 8);
    return out;
}

// round-half-up of a nonnegative rational
inline Int round_rational(const Rational& q) {
    Int num = numerator(q);
    Int den = denominator(q);
    return (2 * num + den) / (2 * den);
}

// fixed-point decimal rendering with round-half-up, for stable CSV output
inline std::string to_decimal_string(const Rational& q, unsigned digits) {
    bool neg = q < 0;
    Rational a = neg ? -q : q;
    Int scale = 1;
    for (unsigned i = 0; i < digits; ++i) {
        scale *= 10;
    }
    Int scaled = round_rational(a * scale);
    Int whole = scaled / scale;
    Int frac = scaled % scale;
    std::string fs = frac.str();
    fs.insert(fs.begin(), digits - fs.size(), '0');
    std::string out = whole.str();
    if (digits > 0) {
        out += "." + fs;
    }
    return neg ? "-" + out : out;
}

}  // namespace repute
