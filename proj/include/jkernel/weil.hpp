#pragma once

// Matrices U_m(gamma) of the Weil representation on the theta vector
// (theta^J_{m,r})_{0 <= r < 2m}, with
//     Theta(gamma(tau, z)) = e(m c z^2 / (c tau + d)) (c tau + d)^(1/2) U_m(gamma) Theta(tau, z)
// and the principal branch of the square root (arg in (-pi/2, pi/2]).
//
// Generator matrices are exact. A plain product over a word agrees with the
// true U_m(gamma) only up to a sign; resolution fixes it either through the
// metaplectic cocycle (exact) or through a numeric fit against the law above.

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include "cyclotomic.hpp"
#include "numeric.hpp"
#include "sl2.hpp"

namespace jkernel
{

template <int N>
class UMatrix
{
public:
    using field = Cyclotomic<N>;

    UMatrix() = default;
    explicit UMatrix(long m) : m_(m), n_(static_cast<std::size_t>(2 * m)), e_(n_ * n_) {}

    static UMatrix identity(long m)
    {
        UMatrix u(m);
        for (std::size_t i = 0; i < u.n_; ++i) {
            u.at(i, i) = field(1);
        }
        u.resolved_ = true;
        return u;
    }

    long m() const noexcept
    {
        return m_;
    }
    std::size_t size() const noexcept
    {
        return n_;
    }
    bool resolved() const noexcept
    {
        return resolved_;
    }
    UMatrix &set_resolved(bool r) noexcept
    {
        resolved_ = r;
        return *this;
    }

    field &at(std::size_t i, std::size_t j)
    {
        return e_[i * n_ + j];
    }
    const field &operator()(std::size_t i, std::size_t j) const
    {
        return e_[i * n_ + j];
    }
    const std::vector<field> &entries() const noexcept
    {
        return e_;
    }

    // The product of two matrices is flagged unresolved.
    friend UMatrix operator*(const UMatrix &a, const UMatrix &b)
    {
        if (a.n_ != b.n_) {
            throw error("matrix size mismatch");
        }
        UMatrix r(a.m_);
        for (std::size_t i = 0; i < a.n_; ++i) {
            for (std::size_t k = 0; k < a.n_; ++k) {
                const field &x = a(i, k);
                if (x.is_zero()) {
                    continue;
                }
                for (std::size_t j = 0; j < a.n_; ++j) {
                    const field &y = b(k, j);
                    if (!y.is_zero()) {
                        r.at(i, j) += x * y;
                    }
                }
            }
        }
        return r;
    }

    UMatrix scaled(const field &s) const
    {
        UMatrix r = *this;
        for (auto &x : r.e_) {
            x = x * s;
        }
        return r;
    }

    UMatrix conj() const
    {
        UMatrix r = *this;
        for (auto &x : r.e_) {
            x = x.conj();
        }
        return r;
    }

    UMatrix transpose() const
    {
        UMatrix r = *this;
        for (std::size_t i = 0; i < n_; ++i) {
            for (std::size_t j = 0; j < n_; ++j) {
                r.at(i, j) = (*this)(j, i);
            }
        }
        return r;
    }

    field det2() const
    {
        if (n_ != 2) {
            throw error("det2 needs a 2x2 matrix");
        }
        return (*this)(0, 0) * (*this)(1, 1) - (*this)(0, 1) * (*this)(1, 0);
    }

    UMatrix inverse2() const
    {
        const field d = det2();
        if (d.is_zero()) {
            throw division_by_zero("singular 2x2 matrix");
        }
        const field inv = d.inverse();
        UMatrix r(m_);
        r.at(0, 0) = (*this)(1, 1) * inv;
        r.at(0, 1) = -(*this)(0, 1) * inv;
        r.at(1, 0) = -(*this)(1, 0) * inv;
        r.at(1, 1) = (*this)(0, 0) * inv;
        r.resolved_ = resolved_;
        return r;
    }

    std::vector<cplx> apply(const std::vector<cplx> &v) const
    {
        std::vector<cplx> out(n_, cplx(0));
        for (std::size_t i = 0; i < n_; ++i) {
            for (std::size_t j = 0; j < n_; ++j) {
                const field &x = (*this)(i, j);
                if (!x.is_zero()) {
                    out[i] += x.to_complex_ld() * v[j];
                }
            }
        }
        return out;
    }

    friend bool operator==(const UMatrix &a, const UMatrix &b)
    {
        return a.m_ == b.m_ && a.e_ == b.e_;
    }

private:
    long m_ = 0;
    std::size_t n_ = 0;
    std::vector<field> e_;
    bool resolved_ = false;
};

// Smallest conductor whose field holds every entry of U_m: lcm(8, 4m).
inline long required_conductor(long m)
{
    return std::lcm(8L, 4 * m);
}

template <int N>
bool field_supports(long m)
{
    return m >= 1 && N % required_conductor(m) == 0;
}

// U_m(T) = diag(e(r^2/4m)), U_m(S) = e(-1/8)/sqrt(2m) (e(-r r'/2m)),
// U_m(-I) = U_m(S)^2 = -i times the permutation r -> -r.
template <int N>
UMatrix<N> u_gen_general(long m, Gen g)
{
    using F = Cyclotomic<N>;
    if (!field_supports<N>(m)) {
        throw unsupported_index("U_" + std::to_string(m) + " needs conductor divisible by " +
                                std::to_string(required_conductor(m)) + ", have " + std::to_string(N));
    }
    const long two_m = 2 * m;
    UMatrix<N> u(m);
    switch (g) {
        case Gen::T:
            for (long r = 0; r < two_m; ++r) {
                u.at(static_cast<std::size_t>(r), static_cast<std::size_t>(r)) =
                    F::root_of_unity((N / (4 * m)) * r * r);
            }
            break;
        case Gen::S: {
            const F scale = F::root_of_unity(-N / 8) * sqrt_positive_integer<N>(two_m).inverse();
            for (long r = 0; r < two_m; ++r) {
                for (long s = 0; s < two_m; ++s) {
                    u.at(static_cast<std::size_t>(r), static_cast<std::size_t>(s)) =
                        scale * F::root_of_unity(-(N / two_m) * ((r * s) % two_m));
                }
            }
            break;
        }
        case Gen::minus_identity: {
            const F mi = -F::root_of_unity(N / 4);
            for (long r = 0; r < two_m; ++r) {
                u.at(static_cast<std::size_t>(r), static_cast<std::size_t>(mod_positive(-r, two_m))) = mi;
            }
            break;
        }
    }
    u.set_resolved(true);
    return u;
}

// The displayed generator matrices for m = 1, 2 over Q(zeta_24), with
// sqrt(i) = zeta_8, e(-1/8) = zeta_8^-1, 1/sqrt 2 = (zeta_8 + zeta_8^-1)/2.
inline UMatrix<24> u_gen(long m, Gen g)
{
    const CycQ i = CycQ::i();
    const CycQ z8 = CycQ::root_of_unity(3);
    const CycQ z8inv = CycQ::root_of_unity(-3);
    if (m == 1) {
        UMatrix<24> u(1);
        switch (g) {
            case Gen::T:
                u.at(0, 0) = 1;
                u.at(1, 1) = i;
                break;
            case Gen::S: {
                const CycQ inv_sqrt2 = (z8 + z8inv).scaled(make_rational(1, 2));
                const CycQ s = z8inv * inv_sqrt2;
                u.at(0, 0) = s;
                u.at(0, 1) = s;
                u.at(1, 0) = s;
                u.at(1, 1) = -s;
                break;
            }
            case Gen::minus_identity: {
                const UMatrix<24> s = u_gen(1, Gen::S);
                u = s * s;
                break;
            }
        }
        u.set_resolved(true);
        return u;
    }
    if (m == 2) {
        UMatrix<24> u(2);
        switch (g) {
            case Gen::T:
                u.at(0, 0) = 1;
                u.at(1, 1) = z8;
                u.at(2, 2) = -1;
                u.at(3, 3) = z8;
                break;
            case Gen::S: {
                const CycQ s = z8inv.scaled(make_rational(1, 2));
                const CycQ rows[4][4] = {{1, 1, 1, 1}, {1, -i, -1, i}, {1, -1, 1, -1}, {1, i, -1, -i}};
                for (std::size_t r = 0; r < 4; ++r) {
                    for (std::size_t c = 0; c < 4; ++c) {
                        u.at(r, c) = s * rows[r][c];
                    }
                }
                break;
            }
            case Gen::minus_identity:
                u.at(0, 0) = -i;
                u.at(1, 3) = -i;
                u.at(2, 2) = -i;
                u.at(3, 1) = -i;
                break;
        }
        u.set_resolved(true);
        return u;
    }
    throw unsupported_index("displayed generators exist only for m = 1, 2");
}

namespace detail
{

template <int N>
UMatrix<N> generator(long m, Gen g)
{
    if constexpr (N == 24) {
        if (m == 1 || m == 2) {
            return u_gen(m, g);
        }
    }
    return u_gen_general<N>(m, g);
}

template <int N>
UMatrix<N> t_power(long m, long p)
{
    using F = Cyclotomic<N>;
    if (!field_supports<N>(m)) {
        throw unsupported_index("field too small for U_" + std::to_string(m));
    }
    UMatrix<N> u(m);
    const long four_m = 4 * m;
    for (long r = 0; r < 2 * m; ++r) {
        const long e = mod_positive((p % four_m) * ((r * r) % four_m), four_m);
        u.at(static_cast<std::size_t>(r), static_cast<std::size_t>(r)) = F::root_of_unity((N / four_m) * e);
    }
    return u;
}

} // namespace detail

// Plain product of generator matrices in word order: S^p as U(S)^(p mod 4),
// (-I)^p as U(-I)^(p mod 2), T^p as U(T)^p. Flagged unresolved.
template <int N>
UMatrix<N> word_product(long m, const GroupWord &w)
{
    UMatrix<N> u = UMatrix<N>::identity(m);
    const UMatrix<N> s = detail::generator<N>(m, Gen::S);
    const UMatrix<N> mi = detail::generator<N>(m, Gen::minus_identity);
    for (const auto &l : w.letters()) {
        switch (l.gen) {
            case Gen::T:
                u = u * detail::t_power<N>(m, l.power);
                break;
            case Gen::S:
                for (long k = 0; k < mod_positive(l.power, 4); ++k) {
                    u = u * s;
                }
                break;
            case Gen::minus_identity:
                if (mod_positive(l.power, 2) == 1) {
                    u = u * mi;
                }
                break;
        }
    }
    u.set_resolved(false);
    return u;
}

namespace detail
{

inline cplx automorphy(const SL2Mat &g, const cplx &tau)
{
    if (g.c() == 0) {
        return cplx(to_ld(g.d()), +0.0L);
    }
    return to_ld(g.c()) * tau + to_ld(g.d());
}

inline cplx mobius(const SL2Mat &g, const cplx &tau)
{
    if (g.c() == 0) {
        return (to_ld(g.a()) * tau + to_ld(g.b())) / to_ld(g.d());
    }
    const long double c = to_ld(g.c());
    return to_long_double(make_rational(g.a(), g.c())) - 1.0L / (c * automorphy(g, tau));
}

inline constexpr long double snap_tolerance = 1e-6L;

// sqrt j(A, B tau) sqrt j(B, tau) / sqrt j(AB, tau), which is +1 or -1.
inline int metaplectic_sign(const SL2Mat &a, const SL2Mat &b)
{
    const cplx tau(0.1L, 1.1L);
    const cplx btau = mobius(b, tau);
    const cplx s = principal_sqrt(automorphy(a, btau)) * principal_sqrt(automorphy(b, tau)) /
                   principal_sqrt(automorphy(a * b, tau));
    if (std::abs(s - cplx(1)) < snap_tolerance) {
        return 1;
    }
    if (std::abs(s + cplx(1)) < snap_tolerance) {
        return -1;
    }
    throw snap_failed("metaplectic cocycle is not a sign");
}

} // namespace detail

// True U_m(gamma) for the word's value, resolved through the metaplectic
// cocycle U(AB) = sigma(A, B) U(A) U(B) over single generators.
template <int N>
UMatrix<N> word_matrix(long m, const GroupWord &w)
{
    UMatrix<N> u = UMatrix<N>::identity(m);
    SL2Mat acc;
    const UMatrix<N> s = detail::generator<N>(m, Gen::S);
    const UMatrix<N> mi = detail::generator<N>(m, Gen::minus_identity);
    auto step = [&](const SL2Mat &g, const UMatrix<N> &ug) {
        const int sign = detail::metaplectic_sign(acc, g);
        u = u * ug;
        if (sign < 0) {
            u = u.scaled(Cyclotomic<N>(-1));
        }
        acc = acc * g;
    };
    for (const auto &l : w.letters()) {
        switch (l.gen) {
            case Gen::T:
                // sigma(A, T^p) = 1
                u = u * detail::t_power<N>(m, l.power);
                acc = acc * SL2Mat::T(l.power);
                break;
            case Gen::S:
                for (long k = 0; k < mod_positive(l.power, 4); ++k) {
                    step(SL2Mat::S(), s);
                }
                break;
            case Gen::minus_identity:
                if (mod_positive(l.power, 2) == 1) {
                    step(SL2Mat::minus_identity(), mi);
                }
                break;
        }
    }
    u.set_resolved(true);
    return u;
}

// True U_m(gamma) from the continued-fraction word of gamma.
template <int N>
UMatrix<N> u_matrix(long m, const SL2Mat &g)
{
    return word_matrix<N>(m, sl2_word(g));
}

struct ScalarFit {
    cplx raw;       // fitted ratio before snapping
    long root = 0;  // sigma = e(root / order)
    long order = 1; // order of the root-of-unity grid
    long double distance = 0;
};

namespace detail
{

inline cplx theta_factor(long m, const SL2Mat &g, const SamplePoint &u, const TransformedPoint &p)
{
    if (g.c() == 0) {
        return principal_sqrt(p.j);
    }
    // m c z^2 / j with z = u.z / |c|
    const long double ac = std::fabs(to_ld(g.c()));
    const long double sgn = g.c() > 0 ? 1.0L : -1.0L;
    const cplx expo = static_cast<long double>(m) * sgn * u.z * u.z / (ac * p.j);
    return e2pi(expo) * principal_sqrt(p.j);
}

} // namespace detail

// Right-hand side e(m c z^2/j) j^(1/2) U Theta(tau, z) of the transformation
// law and its left-hand side Theta(gamma(tau, z)).
template <int N>
std::pair<std::vector<cplx>, std::vector<cplx>> theta_law_sides(long m, const SL2Mat &g, const UMatrix<N> &u,
                                                                const SamplePoint &pt)
{
    const TransformedPoint p = transform_point(g, pt);
    const std::vector<cplx> lhs = theta_vector(m, p.gamma_tau, p.gamma_z);
    std::vector<cplx> rhs = u.apply(theta_vector(m, p.tau, p.z));
    const cplx f = detail::theta_factor(m, g, pt, p);
    for (auto &x : rhs) {
        x *= f;
    }
    return {lhs, rhs};
}

// Fits sigma with sigma * RHS = LHS at one sample point and snaps it to the
// nearest root of unity of order gcd(N, 24).
template <int N>
ScalarFit fit_scalar(long m, const SL2Mat &g, const UMatrix<N> &u, const SamplePoint &pt)
{
    const auto [lhs, rhs] = theta_law_sides<N>(m, g, u, pt);
    cplx num(0);
    long double den = 0;
    for (std::size_t i = 0; i < lhs.size(); ++i) {
        num += std::conj(rhs[i]) * lhs[i];
        den += std::norm(rhs[i]);
    }
    ScalarFit fit;
    fit.raw = num / den;
    fit.order = std::gcd(N, 24);
    const long double ang = std::arg(fit.raw) / (2.0L * detail::pi_ld()) * static_cast<long double>(fit.order);
    fit.root = mod_positive(static_cast<long>(std::llround(ang)), fit.order);
    const cplx snapped = detail::unit_root(Integer(fit.root), Integer(fit.order));
    fit.distance = std::abs(fit.raw - snapped);
    return fit;
}

// sigma * U flagged resolved, with sigma fitted at the sample point.
template <int N>
UMatrix<N> resolve_scalar(long m, const GroupWord &w, const UMatrix<N> &u, const SamplePoint &pt)
{
    const SL2Mat g = w.eval();
    const ScalarFit fit = fit_scalar<N>(m, g, u, pt);
    if (fit.distance > detail::snap_tolerance) {
        throw snap_failed("no root of unity within 1e-6 of the fitted scalar (distance " +
                          std::to_string(static_cast<double>(fit.distance)) + ")");
    }
    UMatrix<N> r = u.scaled(Cyclotomic<N>::root_of_unity(fit.root * (N / fit.order)));
    r.set_resolved(true);
    return r;
}

// X: v_ij = 0 whenever i + j is odd, v11 = v33, v13 = v31.
template <int N>
bool in_X(const UMatrix<N> &v)
{
    if (v.size() != 4) {
        return false;
    }
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
            if ((i + j) % 2 == 1 && !v(i, j).is_zero()) {
                return false;
            }
        }
    }
    return v(1, 1) == v(3, 3) && v(1, 3) == v(3, 1);
}

template <int N>
Cyclotomic<N> r_char(const UMatrix<N> &v)
{
    if (!in_X(v)) {
        throw not_in_group("matrix is not in the subgroup X");
    }
    return v(1, 1) + v(1, 3);
}

inline void require_gamma0(const SL2Mat &g, long m)
{
    if (g.c() % m != 0) {
        throw not_in_group(g.to_string() + " is not in Gamma_0(" + std::to_string(m) + ")");
    }
}

// rho_2(gamma) = r(U_2(gamma))^-1 conj(U_1(gamma_2)).
inline UMatrix<24> rho2(const SL2Mat &g)
{
    require_gamma0(g, 2);
    const UMatrix<24> u2 = u_matrix<24>(2, g);
    const CycQ r = r_char(u2);
    UMatrix<24> rho = u_matrix<24>(1, gamma_m(g, 2)).conj().scaled(r.inverse());
    rho.set_resolved(true);
    return rho;
}

// omega_m(gamma) = det U_1(gamma_m).
inline CycQ omega_m(const SL2Mat &g, long m)
{
    return u_matrix<24>(1, gamma_m(g, m)).det2();
}

// Entries (0,0) and (2,0) of the resolved U_2(S T^-c S).
inline std::pair<CycQ, CycQ> cusp_entry_values(long c)
{
    if (c < 1) {
        throw error("cusp_entry_values needs c >= 1");
    }
    const GroupWord w{{Gen::S, 1}, {Gen::T, -c}, {Gen::S, 1}};
    const UMatrix<24> u = word_matrix<24>(2, w);
    return {u(0, 0), u(2, 0)};
}

// 1 + (-1)^c + sign * 2 zeta_8^-c.
inline CycQ cusp_entry_pattern(long c, int sign)
{
    return CycQ(1) + CycQ(c % 2 == 0 ? 1 : -1) + CycQ::root_of_unity(-3 * c).scaled(Rational(2 * sign));
}

struct BlockReport {
    bool zero_pattern = true;
    bool proportional = true;
    std::string detail;
};

// For gamma in Gamma_0(m): rows 0 and m of the word product vanish outside
// columns {0, m}, and the 2x2 block on {0, m} is a scalar multiple of the
// word product of U_1(gamma_m). Both statements ignore the projective scalar.
template <int N>
BlockReport block_structure(long m, const GroupWord &w)
{
    const SL2Mat g = w.eval();
    require_gamma0(g, m);
    const UMatrix<N> u = word_product<N>(m, w);
    const UMatrix<N> u1 = word_product<N>(1, sl2_word(gamma_m(g, m)));
    BlockReport rep;
    const std::size_t rows[2] = {0, static_cast<std::size_t>(m)};
    for (std::size_t i : rows) {
        for (std::size_t j = 0; j < u.size(); ++j) {
            if (j != 0 && j != static_cast<std::size_t>(m) && !u(i, j).is_zero()) {
                rep.zero_pattern = false;
                rep.detail = "u(" + std::to_string(i) + "," + std::to_string(j) + ") != 0";
            }
        }
    }
    // B = lambda W: all 2x2 cross products B_ij W_kl = B_kl W_ij agree
    using F = Cyclotomic<N>;
    const F b[2][2] = {{u(0, 0), u(0, rows[1])}, {u(rows[1], 0), u(rows[1], rows[1])}};
    const F wv[2][2] = {{u1(0, 0), u1(0, 1)}, {u1(1, 0), u1(1, 1)}};
    for (int p = 0; p < 4; ++p) {
        for (int q = 0; q < 4; ++q) {
            const F lhs = b[p / 2][p % 2] * wv[q / 2][q % 2];
            const F rhs = b[q / 2][q % 2] * wv[p / 2][p % 2];
            if (lhs != rhs) {
                rep.proportional = false;
                rep.detail = "block is not proportional to U_1(gamma_m)";
            }
        }
    }
    return rep;
}

} // namespace jkernel
