#pragma once

// Exact arithmetic in the cyclotomic field Q(zeta_N).
//
// An element is stored as its coordinate vector with respect to the power
// basis 1, zeta, ..., zeta^(phi(N)-1), reduced modulo the N-th cyclotomic
// polynomial. Coordinates are GMP rationals, so the representation is
// canonical and equality is coordinate-wise.
//
// Q(zeta_24) = Q(i, sqrt 2, sqrt 3) holds every scalar the index 1 and 2
// theta machinery needs; CycQ is the alias used throughout the library.

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "rational.hpp"

namespace jkernel
{

namespace detail
{

constexpr int euler_phi(int n)
{
    int result = n;
    for (int p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            while (n % p == 0) {
                n /= p;
            }
            result -= result / p;
        }
    }
    if (n > 1) {
        result -= result / n;
    }
    return result;
}

using int_poly = std::vector<long>;

// Exact quotient of integer polynomials; the divisor must be monic.
inline int_poly poly_div_exact(int_poly num, const int_poly &den)
{
    const std::size_t dn = den.size() - 1;
    if (num.size() < den.size()) {
        return {0};
    }
    int_poly quot(num.size() - dn, 0);
    for (std::size_t k = num.size(); k-- > dn;) {
        const long c = num[k];
        quot[k - dn] = c;
        if (c != 0) {
            for (std::size_t j = 0; j <= dn; ++j) {
                num[k - dn + j] -= c * den[j];
            }
        }
    }
    return quot;
}

inline int_poly cyclotomic_polynomial(int n)
{
    int_poly p(static_cast<std::size_t>(n) + 1, 0);
    p[0] = -1;
    p[static_cast<std::size_t>(n)] = 1;
    for (int d = 1; d < n; ++d) {
        if (n % d == 0) {
            p = poly_div_exact(p, cyclotomic_polynomial(d));
        }
    }
    return p;
}

struct cyclotomic_tables {
    int_poly minimal_polynomial;
    // power[k] = coordinates of zeta^k for 0 <= k < max(N, 2*deg).
    std::vector<std::vector<long>> power;
};

inline cyclotomic_tables build_tables(int n)
{
    cyclotomic_tables t;
    t.minimal_polynomial = cyclotomic_polynomial(n);
    const std::size_t deg = t.minimal_polynomial.size() - 1;
    const std::size_t count = std::max<std::size_t>(static_cast<std::size_t>(n), 2 * deg);
    std::vector<long> cur(deg, 0);
    cur[0] = 1;
    for (std::size_t k = 0; k < count; ++k) {
        t.power.push_back(cur);
        // multiply by x and reduce x^deg = -(phi_0 + ... + phi_{deg-1} x^{deg-1})
        const long top = cur[deg - 1];
        for (std::size_t j = deg - 1; j > 0; --j) {
            cur[j] = cur[j - 1];
        }
        cur[0] = 0;
        if (top != 0) {
            for (std::size_t j = 0; j < deg; ++j) {
                cur[j] -= top * t.minimal_polynomial[j];
            }
        }
    }
    return t;
}

template <int N>
const cyclotomic_tables &tables()
{
    static const cyclotomic_tables t = build_tables(N);
    return t;
}

inline long double pi_ld()
{
    return std::acos(-1.0L);
}

// mpq -> long double with about 106 bits of intermediate accuracy.
inline long double to_long_double(const Rational &r)
{
    const double hi = r.get_d();
    Rational rest = r - Rational(hi);
    return static_cast<long double>(hi) + static_cast<long double>(rest.get_d());
}

} // namespace detail

template <int N>
class Cyclotomic
{
    static_assert(N >= 1, "cyclotomic conductor must be positive");

public:
    static constexpr int conductor = N;
    static constexpr std::size_t degree = static_cast<std::size_t>(detail::euler_phi(N));
    using coords_type = std::array<Rational, degree>;

    Cyclotomic() = default;
    Cyclotomic(long v)
    {
        c_[0] = v;
    }
    Cyclotomic(int v) : Cyclotomic(static_cast<long>(v)) {}
    Cyclotomic(const Rational &v)
    {
        c_[0] = v;
    }
    explicit Cyclotomic(const coords_type &c) : c_(c)
    {
        for (auto &x : c_) {
            x.canonicalize();
        }
    }

    // zeta_N^k, k taken mod N.
    static Cyclotomic root_of_unity(long k)
    {
        const long n = N;
        const auto idx = static_cast<std::size_t>(((k % n) + n) % n);
        const auto &row = detail::tables<N>().power[idx];
        Cyclotomic r;
        for (std::size_t j = 0; j < degree; ++j) {
            r.c_[j] = row[j];
        }
        return r;
    }

    static Cyclotomic i()
    {
        static_assert(N % 4 == 0, "i is not in this field");
        return root_of_unity(N / 4);
    }

    const coords_type &coords() const noexcept
    {
        return c_;
    }
    const Rational &operator[](std::size_t j) const
    {
        return c_[j];
    }

    bool is_zero() const
    {
        for (const auto &x : c_) {
            if (x != 0) {
                return false;
            }
        }
        return true;
    }

    bool is_rational() const
    {
        for (std::size_t j = 1; j < degree; ++j) {
            if (c_[j] != 0) {
                return false;
            }
        }
        return true;
    }

    bool is_one() const
    {
        return is_rational() && c_[0] == 1;
    }

    Cyclotomic operator-() const
    {
        Cyclotomic r;
        for (std::size_t j = 0; j < degree; ++j) {
            r.c_[j] = -c_[j];
        }
        return r;
    }

    Cyclotomic &operator+=(const Cyclotomic &o)
    {
        for (std::size_t j = 0; j < degree; ++j) {
            c_[j] += o.c_[j];
        }
        return *this;
    }
    Cyclotomic &operator-=(const Cyclotomic &o)
    {
        for (std::size_t j = 0; j < degree; ++j) {
            c_[j] -= o.c_[j];
        }
        return *this;
    }
    Cyclotomic &operator*=(const Cyclotomic &o)
    {
        *this = *this * o;
        return *this;
    }
    Cyclotomic &operator/=(const Cyclotomic &o)
    {
        *this = *this / o;
        return *this;
    }

    friend Cyclotomic operator+(Cyclotomic a, const Cyclotomic &b)
    {
        a += b;
        return a;
    }
    friend Cyclotomic operator-(Cyclotomic a, const Cyclotomic &b)
    {
        a -= b;
        return a;
    }

    friend Cyclotomic operator*(const Cyclotomic &a, const Cyclotomic &b)
    {
        if (a.is_rational()) {
            return b.scaled(a.c_[0]);
        }
        if (b.is_rational()) {
            return a.scaled(b.c_[0]);
        }
        std::vector<Rational> prod(2 * degree - 1);
        for (std::size_t i = 0; i < degree; ++i) {
            if (a.c_[i] == 0) {
                continue;
            }
            for (std::size_t j = 0; j < degree; ++j) {
                if (b.c_[j] != 0) {
                    prod[i + j] += a.c_[i] * b.c_[j];
                }
            }
        }
        return reduce(prod);
    }

    friend Cyclotomic operator/(const Cyclotomic &a, const Cyclotomic &b)
    {
        return a * b.inverse();
    }

    friend bool operator==(const Cyclotomic &a, const Cyclotomic &b)
    {
        return a.c_ == b.c_;
    }
    friend bool operator!=(const Cyclotomic &a, const Cyclotomic &b)
    {
        return !(a == b);
    }

    Cyclotomic scaled(const Rational &s) const
    {
        Cyclotomic r;
        if (s == 0) {
            return r;
        }
        for (std::size_t j = 0; j < degree; ++j) {
            if (c_[j] != 0) {
                r.c_[j] = c_[j] * s;
            }
        }
        return r;
    }

    // Multiplicative inverse; solves (a * zeta^j)_j x = e_0 over Q.
    Cyclotomic inverse() const
    {
        if (is_zero()) {
            throw division_by_zero("inverse of zero in Q(zeta_" + std::to_string(N) + ")");
        }
        if (is_rational()) {
            return Cyclotomic(Rational(1) / c_[0]);
        }
        const std::size_t n = degree;
        // augmented matrix, row i = coordinate i
        std::vector<std::vector<Rational>> m(n, std::vector<Rational>(n + 1));
        Cyclotomic col = *this;
        const Cyclotomic zeta = root_of_unity(1);
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t i = 0; i < n; ++i) {
                m[i][j] = col.c_[i];
            }
            col = col * zeta;
        }
        m[0][n] = 1;
        for (std::size_t p = 0; p < n; ++p) {
            std::size_t piv = p;
            while (piv < n && m[piv][p] == 0) {
                ++piv;
            }
            if (piv == n) {
                throw division_by_zero("singular multiplication matrix");
            }
            std::swap(m[p], m[piv]);
            const Rational inv = Rational(1) / m[p][p];
            for (std::size_t j = p; j <= n; ++j) {
                m[p][j] *= inv;
            }
            for (std::size_t i = 0; i < n; ++i) {
                if (i != p && m[i][p] != 0) {
                    const Rational f = m[i][p];
                    for (std::size_t j = p; j <= n; ++j) {
                        m[i][j] -= f * m[p][j];
                    }
                }
            }
        }
        Cyclotomic r;
        for (std::size_t i = 0; i < n; ++i) {
            r.c_[i] = m[i][n];
        }
        return r;
    }

    // Galois automorphism zeta -> zeta^-1 (complex conjugation).
    Cyclotomic conj() const
    {
        std::vector<Rational> acc(degree);
        const auto &t = detail::tables<N>();
        for (std::size_t j = 0; j < degree; ++j) {
            if (c_[j] == 0) {
                continue;
            }
            const auto &row = t.power[(static_cast<std::size_t>(N) - j) % static_cast<std::size_t>(N)];
            for (std::size_t k = 0; k < degree; ++k) {
                if (row[k] != 0) {
                    acc[k] += c_[j] * row[k];
                }
            }
        }
        Cyclotomic r;
        for (std::size_t k = 0; k < degree; ++k) {
            r.c_[k] = acc[k];
        }
        return r;
    }

    Cyclotomic pow(long e) const
    {
        if (e < 0) {
            return inverse().pow(-e);
        }
        Cyclotomic base = *this, acc(1);
        while (e > 0) {
            if (e & 1) {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        return acc;
    }

    // Embedding with zeta_N = exp(2 pi i / N). Computed in long double,
    // so at most 64 bits are meaningful.
    std::complex<long double> to_complex_ld() const
    {
        std::complex<long double> s{0.0L, 0.0L};
        const long double step = 2.0L * detail::pi_ld() / static_cast<long double>(N);
        for (std::size_t j = 0; j < degree; ++j) {
            if (c_[j] != 0) {
                const long double v = detail::to_long_double(c_[j]);
                const long double ang = step * static_cast<long double>(j);
                s += std::complex<long double>(v * std::cos(ang), v * std::sin(ang));
            }
        }
        return s;
    }

    std::complex<double> to_complex(int precision_bits = 53) const
    {
        if (precision_bits < 53 || precision_bits > 64) {
            throw error("to_complex supports precisions between 53 and 64 bits");
        }
        const auto z = to_complex_ld();
        return {static_cast<double>(z.real()), static_cast<double>(z.imag())};
    }

    // Rendering precedence: integer, fraction, Gaussian a + b*i, coordinates.
    std::string to_string() const
    {
        if (is_rational()) {
            return c_[0].get_str();
        }
        if constexpr (N % 4 == 0 && static_cast<std::size_t>(N / 4) < degree) {
            const std::size_t ii = N / 4;
            bool gaussian = true;
            for (std::size_t j = 1; j < degree; ++j) {
                if (j != ii && c_[j] != 0) {
                    gaussian = false;
                }
            }
            if (gaussian) {
                const Rational &re = c_[0];
                const Rational &im = c_[ii];
                std::string imag;
                if (im == 1) {
                    imag = "i";
                } else if (im == -1) {
                    imag = "-i";
                } else {
                    imag = im.get_str() + "*i";
                }
                if (re == 0) {
                    return imag;
                }
                std::string s = "(" + re.get_str();
                if (im < 0) {
                    s += " - " + (imag[0] == '-' ? imag.substr(1) : imag);
                } else {
                    s += " + " + imag;
                }
                return s + ")";
            }
        }
        std::string s = "zeta" + std::to_string(N) + "[";
        for (std::size_t j = 0; j < degree; ++j) {
            if (j) {
                s += ",";
            }
            s += c_[j].get_str();
        }
        return s + "]";
    }

private:
    static Cyclotomic reduce(const std::vector<Rational> &prod)
    {
        const auto &t = detail::tables<N>();
        Cyclotomic r;
        for (std::size_t j = 0; j < degree && j < prod.size(); ++j) {
            r.c_[j] = prod[j];
        }
        for (std::size_t k = degree; k < prod.size(); ++k) {
            if (prod[k] == 0) {
                continue;
            }
            const auto &row = t.power[k];
            for (std::size_t j = 0; j < degree; ++j) {
                if (row[j] != 0) {
                    r.c_[j] += prod[k] * row[j];
                }
            }
        }
        return r;
    }

    coords_type c_{};
};

template <int N>
std::ostream &operator<<(std::ostream &os, const Cyclotomic<N> &a)
{
    return os << a.to_string();
}

template <int N>
Cyclotomic<N> conj(const Cyclotomic<N> &a)
{
    return a.conj();
}

namespace detail
{

inline long legendre(long a, long p)
{
    a %= p;
    if (a < 0) {
        a += p;
    }
    if (a == 0) {
        return 0;
    }
    long r = 1, base = a, e = (p - 1) / 2;
    while (e > 0) {
        if (e & 1) {
            r = r * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    return r == 1 ? 1 : -1;
}

} // namespace detail

// Positive square root of a positive integer, when it lies in Q(zeta_N).
// Odd primes go through quadratic Gauss sums, 2 through zeta_8 + zeta_8^-1.
template <int N>
Cyclotomic<N> sqrt_positive_integer(long d)
{
    using F = Cyclotomic<N>;
    if (d <= 0) {
        throw error("sqrt_positive_integer needs d > 0");
    }
    F result(1);
    long rest = d;
    for (long p = 2; p * p <= rest; ++p) {
        while (rest % (p * p) == 0) {
            result = result.scaled(Rational(p));
            rest /= p * p;
        }
    }
    // rest is square-free now
    long n = rest;
    for (long p = 2; n > 1; ++p) {
        if (n % p != 0) {
            continue;
        }
        n /= p;
        F root;
        if (p == 2) {
            if (N % 8 != 0) {
                throw unsupported_index("sqrt 2 is not in Q(zeta_" + std::to_string(N) + ")");
            }
            root = F::root_of_unity(N / 8) + F::root_of_unity(-N / 8);
        } else {
            const bool one_mod_four = p % 4 == 1;
            if (N % p != 0 || (!one_mod_four && N % (4 * p) != 0)) {
                throw unsupported_index("sqrt " + std::to_string(p) + " is not in Q(zeta_" + std::to_string(N) +
                                        ")");
            }
            F gauss;
            for (long a = 1; a < p; ++a) {
                const F z = F::root_of_unity(a * (N / p));
                if (detail::legendre(a, p) == 1) {
                    gauss += z;
                } else {
                    gauss -= z;
                }
            }
            root = one_mod_four ? gauss : gauss * (-F::root_of_unity(N / 4));
        }
        if (root.to_complex_ld().real() < 0) {
            root = -root;
        }
        result = result * root;
    }
    return result;
}

using CycQ = Cyclotomic<24>;

} // namespace jkernel
