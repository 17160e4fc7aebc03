#pragma once

// Two-variable truncated series phi(tau, z) = sum c(n, r) q^n zeta^r with
// rational q-exponents and integer zeta-powers, the Jacobi theta functions
// theta^J_{m,r}, the theta decomposition, the restriction z = 0 and the
// normalized heat operator.

#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "qseries.hpp"

namespace jkernel
{

class JacobiSeries
{
public:
    using key_type = std::pair<Rational, long>; // (q-exponent, zeta-power)
    using term_map = std::map<key_type, CycQ>;

    JacobiSeries() = default;
    explicit JacobiSeries(Rational valid_below) : valid_below_(std::move(valid_below)) {}

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
    bool is_zero() const noexcept
    {
        return terms_.empty();
    }
    std::size_t size() const noexcept
    {
        return terms_.size();
    }

    // Least q-exponent; valid_below for the zero series.
    Rational valuation() const
    {
        return terms_.empty() ? valid_below_ : terms_.begin()->first.first;
    }

    CycQ coeff(const Rational &n, long r) const
    {
        auto it = terms_.find({n, r});
        return it == terms_.end() ? CycQ{} : it->second;
    }

    void add_term(const Rational &n, long r, const CycQ &c)
    {
        if (n >= valid_below_ || c.is_zero()) {
            return;
        }
        auto [it, inserted] = terms_.try_emplace({n, r}, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) {
                terms_.erase(it);
            }
        }
    }

    JacobiSeries with_meta(FormMeta m) const
    {
        JacobiSeries r = *this;
        r.meta_ = std::move(m);
        return r;
    }

    JacobiSeries truncated(const Rational &bound) const
    {
        JacobiSeries r(std::min(bound, valid_below_));
        for (const auto &[k, c] : terms_) {
            if (k.first >= r.valid_below_) {
                break;
            }
            r.terms_.emplace(k, c);
        }
        r.meta_ = meta_;
        return r;
    }

    JacobiSeries operator-() const
    {
        JacobiSeries r(valid_below_);
        for (const auto &[k, c] : terms_) {
            r.terms_.emplace(k, -c);
        }
        return r;
    }

    friend JacobiSeries operator+(const JacobiSeries &a, const JacobiSeries &b)
    {
        JacobiSeries r(std::min(a.valid_below_, b.valid_below_));
        for (const auto &[k, c] : a.terms_) {
            r.add_term(k.first, k.second, c);
        }
        for (const auto &[k, c] : b.terms_) {
            r.add_term(k.first, k.second, c);
        }
        return r;
    }

    friend JacobiSeries operator-(const JacobiSeries &a, const JacobiSeries &b)
    {
        return a + (-b);
    }

    std::string to_string() const
    {
        std::string out;
        for (const auto &[k, c] : terms_) {
            std::string mon = detail::monomial_text(k.first);
            if (k.second != 0) {
                std::string z = k.second == 1 ? "zeta" : "zeta^" + (k.second < 0 ? "(" + std::to_string(k.second) + ")"
                                                                                  : std::to_string(k.second));
                mon = mon.empty() ? z : mon + "*" + z;
            }
            detail::append_term(out, c.to_string(), mon);
        }
        return out.empty() ? "0" : out;
    }

private:
    term_map terms_;
    Rational valid_below_{0};
    std::optional<FormMeta> meta_;
};

// Convolution in (q-exponent, zeta-power); truncation as for PuiseuxSeries.
// Weights and indices add when both sides carry metadata.
inline JacobiSeries jacobi_mul(const JacobiSeries &a, const JacobiSeries &b)
{
    const Rational bound = std::min(Rational(a.valid_below() + b.valuation()), Rational(b.valid_below() + a.valuation()));
    JacobiSeries r(bound);
    for (const auto &[ka, ca] : a.terms()) {
        for (const auto &[kb, cb] : b.terms()) {
            Rational n = ka.first + kb.first;
            if (n >= bound) {
                break;
            }
            r.add_term(n, ka.second + kb.second, ca * cb);
        }
    }
    if (a.meta() && b.meta()) {
        FormMeta m;
        m.weight = a.meta()->weight + b.meta()->weight;
        m.index = a.meta()->index + b.meta()->index;
        m.level = std::max(a.meta()->level, b.meta()->level);
        m.kind = FormKind::unchecked;
        m.provenance = "product";
        r = r.with_meta(m);
    }
    return r;
}

// Embeds a one-variable series as an index 0 Jacobi series (zeta^0 only).
inline JacobiSeries lift(const PuiseuxSeries &h)
{
    JacobiSeries r(h.valid_below());
    for (const auto &[e, c] : h.terms()) {
        r.add_term(e, 0, c);
    }
    if (h.meta()) {
        FormMeta m = *h.meta();
        m.index = 0;
        r = r.with_meta(m);
    }
    return r;
}

inline JacobiSeries operator*(const PuiseuxSeries &h, const JacobiSeries &phi)
{
    JacobiSeries r = jacobi_mul(lift(h.without_meta()), phi);
    return r;
}

inline long mod_positive(long a, long n)
{
    return ((a % n) + n) % n;
}

// min over representatives r' = r mod 2m of r'^2/4m, the q-valuation of
// theta^J_{m,r}.
inline Rational theta_valuation(long m, long r)
{
    const long rr = mod_positive(r, 2 * m);
    const long r0 = std::min(rr, 2 * m - rr);
    return make_rational(r0 * r0, 4 * m);
}

// theta^J_{m,r}(tau, z) = sum_{N = r mod 2m} q^(N^2/4m) zeta^N, below `order`.
inline JacobiSeries theta_j(long m, long r, const Rational &order)
{
    if (m <= 0) {
        throw error("theta_j needs a positive index");
    }
    if (order <= 0) {
        throw error("theta_j needs order > 0");
    }
    const long rr = mod_positive(r, 2 * m);
    JacobiSeries th(order);
    const double span = std::sqrt(4.0 * static_cast<double>(m) * order.get_d());
    const long k_max = static_cast<long>(span / static_cast<double>(2 * m)) + 2;
    for (long n = -k_max - 1; n <= k_max + 1; ++n) {
        const long big_n = 2 * m * n + rr;
        th.add_term(make_rational(big_n * big_n, 4 * m), big_n, CycQ(1));
    }
    FormMeta meta;
    meta.weight = make_rational(1, 2);
    meta.index = static_cast<int>(m);
    meta.kind = FormKind::theta_component;
    meta.provenance = "theta^J_{" + std::to_string(m) + "," + std::to_string(rr) + "}";
    return th.with_meta(meta);
}

// phi(tau, z) -> phi(tau, 0).
inline PuiseuxSeries restrict_z0(const JacobiSeries &phi)
{
    PuiseuxSeries r(phi.valid_below());
    for (const auto &[k, c] : phi.terms()) {
        r.add_term(k.first, c);
    }
    if (phi.meta()) {
        FormMeta m = *phi.meta();
        m.index = 0;
        r = r.with_meta(m);
    }
    return r;
}

// theta_{m,r}(tau) = theta^J_{m,r}(tau, 0).
inline PuiseuxSeries theta_series(long m, long r, const Rational &order)
{
    return restrict_z0(theta_j(m, r, order));
}

// Normalized heat operator: q^n zeta^r -> (k r^2 - 4n) q^n, summed over r.
inline PuiseuxSeries d2_hat(const JacobiSeries &phi, const Rational &k)
{
    PuiseuxSeries r(phi.valid_below());
    for (const auto &[key, c] : phi.terms()) {
        const Rational factor = k * key.second * key.second - 4 * key.first;
        r.add_term(key.first, c.scaled(factor));
    }
    FormMeta m;
    if (phi.meta()) {
        m = *phi.meta();
    }
    m.weight = k + 2;
    m.index = 0;
    m.kind = FormKind::cuspidal_unchecked;
    m.provenance = "d2_hat";
    return r.with_meta(m);
}

struct HeatReport {
    bool ok = true;
    std::size_t terms_checked = 0;
    std::optional<JacobiSeries::key_type> violation;
};

// Every term of theta^J_{m,r} must satisfy (zeta-power)^2 = 4m (q-exponent).
inline HeatReport heat_check(long m, long r, const Rational &order)
{
    HeatReport rep;
    const JacobiSeries th = theta_j(m, r, order);
    for (const auto &[k, c] : th.terms()) {
        ++rep.terms_checked;
        if (Rational(k.second * k.second) != 4 * m * k.first) {
            rep.ok = false;
            rep.violation = k;
            return rep;
        }
    }
    return rep;
}

namespace detail
{

inline std::string term_text(const Rational &n, long r, const CycQ &c)
{
    return "c(" + n.get_str() + "," + std::to_string(r) + ")=" + c.to_string();
}

} // namespace detail

// Theta decomposition phi = sum_{r mod 2m} h_r theta^J_{m,r}.
//
// h_r has coefficient c(n, r') at q^(n - r'^2/4m) for any r' = r mod 2m.
// Every representative whose q-exponent lies in the valid range must carry
// the same coefficient (absent terms count as zero); otherwise the series is
// not theta-decomposable and decomposition_inconsistent lists the clashes.
// The valid range of h_r is B - r0^2/4m with r0 the smallest representative.
inline std::vector<PuiseuxSeries> theta_decompose(const JacobiSeries &phi, long m)
{
    if (m <= 0) {
        throw error("theta_decompose needs a positive index");
    }
    const long two_m = 2 * m;
    const Rational four_m(4 * m);
    const Rational &bound = phi.valid_below();

    // (class, reduced exponent) -> observed (r', c)
    std::map<std::pair<long, Rational>, std::map<long, CycQ>> groups;
    for (const auto &[k, c] : phi.terms()) {
        const long cls = mod_positive(k.second, two_m);
        const Rational e = k.first - Rational(k.second * k.second) / four_m;
        groups[{cls, e}].emplace(k.second, c);
    }

    std::vector<decomposition_inconsistent::witness> witnesses;
    std::vector<PuiseuxSeries> h;
    h.reserve(static_cast<std::size_t>(two_m));
    for (long r = 0; r < two_m; ++r) {
        h.emplace_back(bound - theta_valuation(m, r));
    }

    for (const auto &[key, reps] : groups) {
        const auto &[cls, e] = key;
        // all representatives r' = cls mod 2m with e + r'^2/4m < bound
        const Rational room = (bound - e) * four_m; // r'^2 < room
        const double lim = std::sqrt(std::max(0.0, room.get_d())) + 1.0;
        const long kmax = static_cast<long>(lim / static_cast<double>(two_m)) + 2;
        const auto &ref = *reps.begin();
        for (long j = -kmax; j <= kmax; ++j) {
            const long rp = cls + two_m * j;
            if (Rational(rp * rp) >= room) {
                continue;
            }
            auto it = reps.find(rp);
            const CycQ c = it == reps.end() ? CycQ{} : it->second;
            if (c != ref.second && witnesses.size() < 16) {
                witnesses.emplace_back(detail::term_text(e + Rational(ref.first * ref.first) / four_m, ref.first,
                                                         ref.second),
                                       detail::term_text(e + Rational(rp * rp) / four_m, rp, c));
            }
        }
        h[static_cast<std::size_t>(cls)].add_term(e, ref.second);
    }
    if (!witnesses.empty()) {
        throw decomposition_inconsistent(std::move(witnesses));
    }
    for (long r = 0; r < two_m; ++r) {
        FormMeta meta;
        if (phi.meta()) {
            meta.weight = phi.meta()->weight - make_rational(1, 2);
            meta.level = phi.meta()->level;
            meta.character = phi.meta()->character;
        }
        meta.kind = FormKind::unchecked;
        meta.provenance = "h_{" + std::to_string(m) + "," + std::to_string(r) + "}";
        h[static_cast<std::size_t>(r)] = h[static_cast<std::size_t>(r)].with_meta(meta);
    }
    return h;
}

// h * theta^J_{m,r} with the theta built deep enough that the product is
// valid below B(h) + val(theta^J_{m,r}).
inline JacobiSeries times_theta_j(const PuiseuxSeries &h, long m, long r)
{
    const Rational tv = theta_valuation(m, r);
    Rational depth = h.valid_below() + tv - h.valuation();
    if (depth <= tv) {
        depth = tv + 1;
    }
    return h * theta_j(m, r, depth);
}

// sum_r h_r theta^J_{m,r}.
inline JacobiSeries recompose(const std::vector<PuiseuxSeries> &h, long m)
{
    if (h.size() != static_cast<std::size_t>(2 * m)) {
        throw error("recompose needs exactly 2m components");
    }
    std::optional<JacobiSeries> acc;
    for (long r = 0; r < 2 * m; ++r) {
        JacobiSeries t = times_theta_j(h[static_cast<std::size_t>(r)], m, r);
        acc = acc ? *acc + t : t;
    }
    return *acc;
}

struct SymmetryReport {
    bool symmetric = true;
    std::optional<long> first_asymmetric_r;
    Rational bound{0};
};

// h_{m,r} = h_{m,2m-r} for every r, below the common valid range.
inline SymmetryReport symmetry_check(const JacobiSeries &phi, long m)
{
    const auto h = theta_decompose(phi, m);
    SymmetryReport rep;
    rep.bound = phi.valid_below();
    for (long r = 1; r < m; ++r) {
        const auto cmp = compare(h[static_cast<std::size_t>(r)], h[static_cast<std::size_t>(2 * m - r)]);
        rep.bound = std::min(rep.bound, cmp.bound);
        if (!cmp.equal && rep.symmetric) {
            rep.symmetric = false;
            rep.first_asymmetric_r = r;
        }
    }
    return rep;
}

// c(n, r) = c(n, -r) on the stored terms; the parity forced by -I_2 at even
// weight.
inline bool parity_check(const JacobiSeries &phi)
{
    for (const auto &[k, c] : phi.terms()) {
        if (phi.coeff(k.first, -k.second) != c) {
            return false;
        }
    }
    return true;
}

} // namespace jkernel
