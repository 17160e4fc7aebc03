#pragma once

// Floating-point evaluation of theta vectors, eta and truncated series on the
// upper half-plane, in long double.
//
// Sample points are given in balanced coordinates u: for gamma with c != 0 the
// actual point is tau = -d/c + u/|c|, so that c tau + d = sgn(c) u and both
// Im tau and Im(gamma tau) are of size Im(u)/|c|. Translations by integers are
// removed exactly before summing, which keeps phases accurate for large Re tau.

#include <cmath>
#include <complex>
#include <vector>

#include "jacobi.hpp"
#include "qseries.hpp"
#include "sl2.hpp"

namespace jkernel
{

using cplx = std::complex<long double>;

namespace detail
{

inline cplx e2pi(const cplx &x)
{
    const long double t = 2.0L * detail::pi_ld();
    return std::exp(cplx(-t * x.imag(), t * x.real()));
}

// exp(2 pi i p / q), reduced exactly mod q.
inline cplx unit_root(const Integer &p, const Integer &q)
{
    Integer rem;
    mpz_fdiv_r(rem.get_mpz_t(), p.get_mpz_t(), q.get_mpz_t());
    const long double ang = 2.0L * detail::pi_ld() * to_long_double(make_rational(rem, q));
    return {std::cos(ang), std::sin(ang)};
}

inline long double to_ld(const Integer &z)
{
    return to_long_double(Rational(z));
}

// Nearest integer to x, as an Integer.
inline Integer nearest_integer(long double x)
{
    const long double f = std::floor(x + 0.5L);
    if (std::fabs(f) < 9.0e18L) {
        return Integer(static_cast<long>(f));
    }
    throw error("real part too large for exact translation");
}

// Least |N| beyond which exp(-2 pi (N^2 y / 4m - |N| |w|)) < e^-60.
inline long theta_cutoff(long m, long double y, long double w)
{
    if (y <= 0) {
        throw error("theta evaluation needs Im tau > 0");
    }
    const long double a = y / (4.0L * static_cast<long double>(m));
    const long double b = std::fabs(w);
    const long double c = 60.0L / (2.0L * detail::pi_ld());
    const long double n = (b + std::sqrt(b * b + 4.0L * a * c)) / (2.0L * a);
    if (n > 5.0e7L) {
        throw error("theta evaluation point too close to the real axis");
    }
    return static_cast<long>(n) + 2;
}

} // namespace detail

// theta^J_{m,r}(tau, z) for 0 <= r < 2m.
inline std::vector<cplx> theta_vector(long m, const cplx &tau, const cplx &z)
{
    const Integer n0 = detail::nearest_integer(tau.real());
    const cplx tf = tau - detail::to_ld(n0);
    const long nmax = detail::theta_cutoff(m, tf.imag(), z.imag());
    const long double inv4m = 1.0L / static_cast<long double>(4 * m);
    std::vector<cplx> out(static_cast<std::size_t>(2 * m), cplx(0));
    for (long r = 0; r < 2 * m; ++r) {
        cplx s(0);
        const long kmax = nmax / (2 * m) + 2;
        for (long k = -kmax; k <= kmax; ++k) {
            const long n = r + 2 * m * k;
            if (std::labs(n) > nmax) {
                continue;
            }
            const long double nn = static_cast<long double>(n);
            s += detail::e2pi(nn * nn * inv4m * tf + nn * z);
        }
        // N^2 = r^2 mod 4m, so tau -> tau + n0 multiplies by e(n0 r^2 / 4m)
        out[static_cast<std::size_t>(r)] = s * detail::unit_root(n0 * (r * r), Integer(4 * m));
    }
    return out;
}

struct ThetaNull {
    std::vector<cplx> value; // theta_{m,r}(tau)
    std::vector<cplx> d;     // D theta_{m,r}(tau), D = q d/dq
};

inline ThetaNull theta_null(long m, const cplx &tau)
{
    const Integer n0 = detail::nearest_integer(tau.real());
    const cplx tf = tau - detail::to_ld(n0);
    const long nmax = detail::theta_cutoff(m, tf.imag(), 0.0L) + 4;
    const long double inv4m = 1.0L / static_cast<long double>(4 * m);
    ThetaNull res;
    res.value.assign(static_cast<std::size_t>(2 * m), cplx(0));
    res.d.assign(static_cast<std::size_t>(2 * m), cplx(0));
    for (long r = 0; r < 2 * m; ++r) {
        cplx s(0), ds(0);
        const long kmax = nmax / (2 * m) + 2;
        for (long k = -kmax; k <= kmax; ++k) {
            const long n = r + 2 * m * k;
            if (std::labs(n) > nmax) {
                continue;
            }
            const long double e = static_cast<long double>(n) * static_cast<long double>(n) * inv4m;
            const cplx t = detail::e2pi(e * tf);
            s += t;
            ds += e * t;
        }
        const cplx ph = detail::unit_root(n0 * (r * r), Integer(4 * m));
        res.value[static_cast<std::size_t>(r)] = s * ph;
        res.d[static_cast<std::size_t>(r)] = ds * ph;
    }
    return res;
}

// eta(tau) = sum_k (-1)^k q^((6k-1)^2/24).
inline cplx eta_value(const cplx &tau)
{
    const Integer n0 = detail::nearest_integer(tau.real());
    const cplx tf = tau - detail::to_ld(n0);
    const long double y = tf.imag();
    if (y <= 0) {
        throw error("eta evaluation needs Im tau > 0");
    }
    // (6k-1)^2 / 24 * 2 pi y > 60
    const long kmax = static_cast<long>(std::sqrt(24.0L * 60.0L / (2.0L * detail::pi_ld() * y)) / 6.0L) + 2;
    cplx s(0);
    for (long k = -kmax; k <= kmax; ++k) {
        const long double n = static_cast<long double>(6 * k - 1);
        const cplx t = detail::e2pi(n * n / 24.0L * tf);
        s += (k % 2 == 0) ? t : -t;
    }
    return s * detail::unit_root(n0, Integer(24));
}

// Truncation tail estimate (terms + 1) max|c| |q|^B must stay below 1e-14.
inline constexpr long double tail_tolerance = 1e-14L;

inline cplx eval_series(const PuiseuxSeries &a, const cplx &tau)
{
    const Integer n0 = detail::nearest_integer(tau.real());
    const cplx tf = tau - detail::to_ld(n0);
    long double maxc = 0;
    cplx s(0);
    for (const auto &[e, c] : a.terms()) {
        const cplx cv = c.to_complex_ld();
        maxc = std::max(maxc, std::abs(cv));
        const cplx ph = detail::unit_root(e.get_num() * n0, e.get_den());
        s += cv * ph * detail::e2pi(detail::to_long_double(e) * tf);
    }
    const long double tail = (static_cast<long double>(a.size()) + 1.0L) * std::max(maxc, 1.0L) *
                             std::exp(-2.0L * detail::pi_ld() * tf.imag() * detail::to_long_double(a.valid_below()));
    if (!(tail < tail_tolerance)) {
        throw tail_too_large("series valid below " + power_text(a.valid_below()) +
                             " is too short for Im tau = " + std::to_string(static_cast<double>(tf.imag())));
    }
    return s;
}

inline cplx eval_series(const JacobiSeries &a, const cplx &tau, const cplx &z)
{
    const Integer n0 = detail::nearest_integer(tau.real());
    const cplx tf = tau - detail::to_ld(n0);
    long double maxc = 0;
    long double maxr = 0;
    cplx s(0);
    for (const auto &[k, c] : a.terms()) {
        const cplx cv = c.to_complex_ld();
        maxc = std::max(maxc, std::abs(cv));
        maxr = std::max(maxr, static_cast<long double>(std::labs(k.second)));
        const cplx ph = detail::unit_root(k.first.get_num() * n0, k.first.get_den());
        s += cv * ph *
             detail::e2pi(detail::to_long_double(k.first) * tf + static_cast<long double>(k.second) * z);
    }
    const long double tail =
        (static_cast<long double>(a.size()) + 1.0L) * std::max(maxc, 1.0L) *
        std::exp(-2.0L * detail::pi_ld() * (tf.imag() * detail::to_long_double(a.valid_below()) - maxr * std::fabs(z.imag())));
    if (!(tail < tail_tolerance)) {
        throw tail_too_large("Jacobi series valid below " + power_text(a.valid_below()) + " is too short here");
    }
    return s;
}

struct SamplePoint {
    cplx tau;
    cplx z{0};
};

// A sample point together with its image under gamma and the automorphy
// factor j = c tau + d, all computed without cancellation.
struct TransformedPoint {
    cplx tau;
    cplx z;
    cplx gamma_tau;
    cplx gamma_z;
    cplx j;
};

inline TransformedPoint transform_point(const SL2Mat &g, const SamplePoint &u)
{
    TransformedPoint p;
    if (g.c() == 0) {
        // a = d = +-1, gamma tau = tau + b d
        const long double d = detail::to_ld(g.d());
        p.tau = u.tau;
        p.z = u.z;
        p.j = cplx(d, +0.0L);
        p.gamma_tau = u.tau + detail::to_ld(g.b() * g.d());
        p.gamma_z = u.z / d;
        return p;
    }
    const long double c = detail::to_ld(g.c());
    const long double ac = std::fabs(c);
    const long double sgn = c > 0 ? 1.0L : -1.0L;
    const Rational mdc = make_rational(Integer(-g.d()), g.c());
    const Rational ac_over = make_rational(g.a(), g.c());
    p.tau = detail::to_long_double(mdc) + u.tau / ac;
    p.z = u.z / ac;
    p.j = sgn * u.tau;
    p.gamma_tau = detail::to_long_double(ac_over) - 1.0L / (ac * u.tau);
    p.gamma_z = p.z / p.j;
    return p;
}

// Principal branch, arg in (-pi/2, pi/2].
inline cplx principal_sqrt(const cplx &w)
{
    return std::sqrt(w);
}

inline cplx principal_pow(const cplx &w, const Rational &k)
{
    if (is_integer(k)) {
        const long e = to_long(k.get_num());
        cplx r(1);
        cplx b = e >= 0 ? w : cplx(1) / w;
        for (long i = 0; i < std::labs(e); ++i) {
            r *= b;
        }
        return r;
    }
    // half-integers: w^(n/2) = sqrt(w)^n
    if (k.get_den() != 2) {
        throw error("only integral and half-integral weights are supported");
    }
    return principal_pow(principal_sqrt(w), Rational(k.get_num()));
}

} // namespace jkernel
