#pragma once

#include <algorithm>
#include <cctype>
#include <string>
#include <string_view>

#include <gmpxx.h>

#include "errors.hpp"

namespace jkernel
{

using Rational = mpq_class;
using Integer = mpz_class;

inline Rational make_rational(long num, long den = 1)
{
    if (den == 0) {
        throw division_by_zero("rational with zero denominator");
    }
    Rational r(num, den);
    r.canonicalize();
    return r;
}

inline Rational make_rational(const Integer &num, const Integer &den)
{
    if (den == 0) {
        throw division_by_zero("rational with zero denominator");
    }
    Rational r(num, den);
    r.canonicalize();
    return r;
}

// Accepts "p", "-p", "p/q" with optional surrounding whitespace.
inline Rational parse_rational(std::string_view text)
{
    std::string s;
    for (char ch : text) {
        if (!std::isspace(static_cast<unsigned char>(ch))) {
            s.push_back(ch);
        }
    }
    if (s.empty()) {
        throw parse_error("empty rational literal");
    }
    const auto slash = s.find('/');
    auto valid_int = [](const std::string &t) {
        std::size_t i = (!t.empty() && (t[0] == '-' || t[0] == '+')) ? 1 : 0;
        if (i >= t.size()) {
            return false;
        }
        return std::all_of(t.begin() + static_cast<long>(i), t.end(),
                           [](char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; });
    };
    std::string num = s.substr(0, slash);
    std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
    if (!num.empty() && num[0] == '+') {
        num.erase(0, 1);
    }
    if (!valid_int(num) || !valid_int(den) || den[0] == '-' || den[0] == '+') {
        throw parse_error("malformed rational literal '" + std::string(text) + "'");
    }
    Integer n(num, 10), d(den, 10);
    if (d == 0) {
        throw parse_error("rational literal with zero denominator '" + std::string(text) + "'");
    }
    return make_rational(n, d);
}

inline std::string to_string(const Rational &r)
{
    return r.get_str(10);
}

inline std::string to_string(const Integer &z)
{
    return z.get_str(10);
}

inline Integer floor_of(const Rational &r)
{
    Integer q;
    mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
    return q;
}

inline Integer ceil_of(const Rational &r)
{
    Integer q;
    mpz_cdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
    return q;
}

inline bool is_integer(const Rational &r)
{
    return r.get_den() == 1;
}

inline long to_long(const Integer &z)
{
    if (!z.fits_slong_p()) {
        throw error("integer does not fit in a machine word: " + z.get_str());
    }
    return z.get_si();
}

} // namespace jkernel
