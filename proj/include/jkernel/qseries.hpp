#pragma once

// Sparse truncated Puiseux series in q = exp(2 pi i tau).
//
// Exponents are exact rationals; every stored exponent is strictly below
// valid_below, and nothing is asserted at or above it. Products follow the
// usual truncation rule
//
//     B(a*b) = min(B(a) + val(b), B(b) + val(a)),
//
// where val is the least stored exponent (val of a zero series is its own
// bound). Derivatives are taken with D = q d/dq = (1/2 pi i) d/dtau, so that
// every identity between theta functions and their derivatives stays inside
// Q(zeta_24).

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cyclotomic.hpp"
#include "errors.hpp"
#include "rational.hpp"

namespace jkernel
{

enum class FormKind { modular, cuspidal, theta_component, unchecked, cuspidal_unchecked };

// "q^e" with non-integer exponents parenthesised, for messages.
inline std::string power_text(const Rational &e)
{
    return is_integer(e) ? "q^" + e.get_str() : "q^(" + e.get_str() + ")";
}

inline std::string to_string(FormKind k)
{
    switch (k) {
        case FormKind::modular:
            return "modular";
        case FormKind::cuspidal:
            return "cuspidal";
        case FormKind::theta_component:
            return "theta-component";
        case FormKind::unchecked:
            return "unchecked";
        case FormKind::cuspidal_unchecked:
            return "cuspidal-unchecked";
    }
    return "unchecked";
}

inline FormKind form_kind_from_string(const std::string &s)
{
    for (auto k : {FormKind::modular, FormKind::cuspidal, FormKind::theta_component, FormKind::unchecked,
                   FormKind::cuspidal_unchecked}) {
        if (to_string(k) == s) {
            return k;
        }
    }
    throw parse_error("unknown form kind '" + s + "'");
}

// Descriptive metadata. Records membership claims; never alters arithmetic.
struct FormMeta {
    Rational weight{0};
    int index = 0;
    int level = 1;
    std::string character = "trivial";
    FormKind kind = FormKind::unchecked;
    std::string provenance;

    friend bool operator==(const FormMeta &, const FormMeta &) = default;
};

class PuiseuxSeries
{
public:
    using term_map = std::map<Rational, CycQ>;

    PuiseuxSeries() = default;
    explicit PuiseuxSeries(Rational valid_below) : valid_below_(std::move(valid_below)) {}
    PuiseuxSeries(const term_map &terms, Rational valid_below, std::optional<FormMeta> meta = {})
        : valid_below_(std::move(valid_below)), meta_(std::move(meta))
    {
        for (const auto &[e, c] : terms) {
            add_term(e, c);
        }
    }

    static PuiseuxSeries monomial(const CycQ &c, const Rational &e, const Rational &valid_below)
    {
        PuiseuxSeries s(valid_below);
        s.add_term(e, c);
        return s;
    }

    const term_map &terms() const noexcept
    {
        return terms_;
    }
    const Rational &valid_below() const noexcept
    {
        return valid_below_;
    }
    const std::optional<FormMeta> &meta() const noexcept
    {
        return meta_;
    }
    std::size_t size() const noexcept
    {
        return terms_.size();
    }

    bool is_zero() const noexcept
    {
        return terms_.empty();
    }

    Rational valuation() const
    {
        return terms_.empty() ? valid_below_ : terms_.begin()->first;
    }

    const CycQ &leading_coefficient() const
    {
        if (terms_.empty()) {
            throw error("leading coefficient of a zero series");
        }
        return terms_.begin()->second;
    }

    CycQ coeff(const Rational &e) const
    {
        if (e >= valid_below_) {
            throw error("coefficient of " + power_text(e) + " is beyond the valid range " + valid_below_.get_str());
        }
        auto it = terms_.find(e);
        return it == terms_.end() ? CycQ{} : it->second;
    }

    // Accumulates c q^e; silently drops terms at or above valid_below.
    void add_term(const Rational &e, const CycQ &c)
    {
        if (e >= valid_below_ || c.is_zero()) {
            return;
        }
        auto [it, inserted] = terms_.try_emplace(e, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) {
                terms_.erase(it);
            }
        }
    }

    PuiseuxSeries truncated(const Rational &bound) const
    {
        PuiseuxSeries r(std::min(bound, valid_below_));
        for (const auto &[e, c] : terms_) {
            if (e >= r.valid_below_) {
                break;
            }
            r.terms_.emplace(e, c);
        }
        r.meta_ = meta_;
        return r;
    }

    PuiseuxSeries with_meta(FormMeta m) const
    {
        PuiseuxSeries r = *this;
        r.meta_ = std::move(m);
        return r;
    }

    PuiseuxSeries without_meta() const
    {
        PuiseuxSeries r = *this;
        r.meta_.reset();
        return r;
    }

    PuiseuxSeries operator-() const
    {
        PuiseuxSeries r(valid_below_);
        for (const auto &[e, c] : terms_) {
            r.terms_.emplace(e, -c);
        }
        return r;
    }

    friend PuiseuxSeries operator+(const PuiseuxSeries &a, const PuiseuxSeries &b)
    {
        PuiseuxSeries r(std::min(a.valid_below_, b.valid_below_));
        for (const auto &[e, c] : a.terms_) {
            r.add_term(e, c);
        }
        for (const auto &[e, c] : b.terms_) {
            r.add_term(e, c);
        }
        return r;
    }

    friend PuiseuxSeries operator-(const PuiseuxSeries &a, const PuiseuxSeries &b)
    {
        return a + (-b);
    }

    friend PuiseuxSeries operator*(const PuiseuxSeries &a, const PuiseuxSeries &b)
    {
        const Rational bound = std::min(Rational(a.valid_below_ + b.valuation()), Rational(b.valid_below_ + a.valuation()));
        PuiseuxSeries r(bound);
        for (const auto &[ea, ca] : a.terms_) {
            for (const auto &[eb, cb] : b.terms_) {
                Rational e = ea + eb;
                if (e >= bound) {
                    break;
                }
                r.add_term(e, ca * cb);
            }
        }
        return r;
    }

    friend PuiseuxSeries operator*(const CycQ &s, const PuiseuxSeries &a)
    {
        PuiseuxSeries r(a.valid_below_);
        if (s.is_zero()) {
            return r;
        }
        for (const auto &[e, c] : a.terms_) {
            r.terms_.emplace(e, s * c);
        }
        return r;
    }

    // Multiplication by c q^e; shifts the valid range as well.
    PuiseuxSeries shifted(const Rational &e, const CycQ &c = CycQ(1)) const
    {
        PuiseuxSeries r(valid_below_ + e);
        if (c.is_zero()) {
            return r;
        }
        for (const auto &[x, v] : terms_) {
            r.terms_.emplace(x + e, c * v);
        }
        return r;
    }

    std::string to_string() const;

private:
    term_map terms_;
    Rational valid_below_{0};
    std::optional<FormMeta> meta_;
};

// Result of comparing two truncated series below their common bound.
struct SeriesComparison {
    bool equal = true;
    Rational bound{0};
    std::optional<Rational> first_difference;

    std::string witness() const
    {
        return first_difference ? power_text(*first_difference) : "";
    }
};

inline SeriesComparison compare(const PuiseuxSeries &a, const PuiseuxSeries &b)
{
    SeriesComparison res;
    res.bound = std::min(a.valid_below(), b.valid_below());
    const PuiseuxSeries diff = (a - b).truncated(res.bound);
    if (!diff.is_zero()) {
        res.equal = false;
        res.first_difference = diff.valuation();
    }
    return res;
}

inline bool agree(const PuiseuxSeries &a, const PuiseuxSeries &b)
{
    return compare(a, b).equal;
}

// D = q d/dq.
inline PuiseuxSeries euler_d(const PuiseuxSeries &a)
{
    PuiseuxSeries r(a.valid_below());
    for (const auto &[e, c] : a.terms()) {
        r.add_term(e, c.scaled(e));
    }
    return r;
}

// tau -> m tau.
inline PuiseuxSeries dilate(const PuiseuxSeries &a, long m)
{
    if (m <= 0) {
        throw error("dilate needs a positive factor");
    }
    PuiseuxSeries r(a.valid_below() * m);
    for (const auto &[e, c] : a.terms()) {
        r.add_term(e * m, c);
    }
    return r;
}

// Dedekind eta, q^(1/24) prod_{n>=1} (1 - q^n), valid below `order`.
inline PuiseuxSeries eta(const Rational &order)
{
    const Rational offset = make_rational(1, 24);
    if (order <= offset) {
        throw error("eta needs order > 1/24");
    }
    const long count = to_long(ceil_of(order - offset));
    std::vector<long> p(static_cast<std::size_t>(count), 0);
    p[0] = 1;
    for (long n = 1; n < count; ++n) {
        for (long k = count - 1; k >= n; --k) {
            p[static_cast<std::size_t>(k)] -= p[static_cast<std::size_t>(k - n)];
        }
    }
    FormMeta meta;
    meta.weight = make_rational(1, 2);
    meta.character = "eta-multiplier";
    meta.kind = FormKind::modular;
    meta.provenance = "q^(1/24) prod (1 - q^n)";
    PuiseuxSeries r(order);
    for (long k = 0; k < count; ++k) {
        if (p[static_cast<std::size_t>(k)] != 0) {
            r.add_term(offset + k, CycQ(p[static_cast<std::size_t>(k)]));
        }
    }
    return r.with_meta(meta);
}

inline PuiseuxSeries pow(const PuiseuxSeries &a, unsigned e)
{
    if (e == 0) {
        PuiseuxSeries one(a.valid_below() - a.valuation());
        one.add_term(Rational(0), CycQ(1));
        return one;
    }
    PuiseuxSeries acc = a;
    for (unsigned k = 1; k < e; ++k) {
        acc = acc * a;
    }
    return acc;
}

// Exact quotient c = a / b by sparse long division. The valid range is
//     B(c) = min(B(a) - val(b), B(b) + val(a) - 2 val(b)),
// which makes div_exact(a*b, b) reproduce a on the range a*b determines.
inline PuiseuxSeries div_exact(const PuiseuxSeries &a, const PuiseuxSeries &b)
{
    if (b.is_zero()) {
        throw division_by_zero("division by a series that vanishes below " + power_text(b.valid_below()));
    }
    const Rational beta = b.valuation();
    const CycQ lead_inv = b.leading_coefficient().inverse();
    const Rational bound = std::min(Rational(a.valid_below() - beta), Rational(b.valid_below() + a.valuation() - 2 * beta));
    const Rational rem_bound = bound + beta;

    PuiseuxSeries::term_map rem;
    for (const auto &[e, c] : a.terms()) {
        if (e >= rem_bound) {
            break;
        }
        rem.emplace(e, c);
    }
    PuiseuxSeries quot(bound);
    while (!rem.empty()) {
        auto first = rem.begin();
        const Rational e = first->first;
        const CycQ t = first->second * lead_inv;
        const Rational qe = e - beta;
        quot.add_term(qe, t);
        for (const auto &[eb, cb] : b.terms()) {
            Rational e2 = qe + eb;
            if (e2 >= rem_bound) {
                break;
            }
            auto [it, inserted] = rem.try_emplace(e2, -(t * cb));
            if (!inserted) {
                it->second -= t * cb;
                if (it->second.is_zero()) {
                    rem.erase(it);
                }
            }
        }
    }
    return quot;
}

namespace detail
{

inline std::string monomial_text(const Rational &e)
{
    if (e == 0) {
        return "";
    }
    if (e == 1) {
        return "q";
    }
    if (is_integer(e) && e > 0) {
        return "q^" + e.get_str();
    }
    return "q^(" + e.get_str() + ")";
}

// Appends `coeff * monom` to a running sum rendering.
inline void append_term(std::string &out, const std::string &coeff_text, const std::string &monom)
{
    std::string c = coeff_text;
    bool negative = false;
    if (!c.empty() && c[0] == '-') {
        negative = true;
        c.erase(0, 1);
    }
    std::string body;
    if (monom.empty()) {
        body = c;
    } else if (c == "1") {
        body = monom;
    } else {
        body = c + "*" + monom;
    }
    if (out.empty()) {
        out = negative ? "-" + body : body;
    } else {
        out += negative ? " - " : " + ";
        out += body;
    }
}

} // namespace detail

inline std::string PuiseuxSeries::to_string() const
{
    std::string out;
    for (const auto &[e, c] : terms_) {
        detail::append_term(out, c.to_string(), detail::monomial_text(e));
    }
    return out.empty() ? "0" : out;
}

} // namespace jkernel
