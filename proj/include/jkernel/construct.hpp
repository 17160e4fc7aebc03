#pragma once

// The kernel isomorphisms and the theta-Wronskian cusp forms.
//
// All Wronskians are stored hatted: xi_hat = xi / (2 pi i), built with
// D = q d/dq. Inputs to the isomorphisms are arbitrary truncated series;
// modularity is recorded in metadata as a claim, never checked here.

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "jacobi.hpp"
#include "qseries.hpp"

namespace jkernel
{

namespace detail
{

// theta_{m,r} deep enough that multiplying it into a series valid below
// `bound` with valuation `val` loses nothing: B(theta) >= bound + v(theta) - val.
inline PuiseuxSeries theta_for_product(long m, long r, const Rational &bound, const Rational &val)
{
    const Rational tv = theta_valuation(m, r);
    Rational depth = bound + tv - val;
    if (depth <= tv) {
        depth = tv + 1;
    }
    return theta_series(m, r, depth);
}

// theta_{m,r} deep enough to divide a series valid below `bound` with
// valuation `val`: B(theta) >= bound + v(theta) - val.
inline PuiseuxSeries theta_for_quotient(long m, long r, const Rational &bound, const Rational &val)
{
    return theta_for_product(m, r, bound, val);
}

inline PuiseuxSeries times_theta(const PuiseuxSeries &h, long m, long r)
{
    return h * theta_for_product(m, r, h.valid_below(), h.valuation());
}

inline PuiseuxSeries over_theta(const PuiseuxSeries &h, long m, long r)
{
    return div_exact(h, theta_for_quotient(m, r, h.valid_below(), h.valuation()));
}

// theta_{m,a} D theta_{m,b} - theta_{m,b} D theta_{m,a}, valid below `order`.
inline PuiseuxSeries wronskian(long m, long a, long b, const Rational &order)
{
    const Rational depth = order + 1;
    const PuiseuxSeries ta = theta_series(m, a, depth);
    const PuiseuxSeries tb = theta_series(m, b, depth);
    return (ta * euler_d(tb) - tb * euler_d(ta)).truncated(order);
}

inline FormMeta cusp_meta(int level, const std::string &character, const std::string &provenance)
{
    FormMeta meta;
    meta.weight = Rational(3);
    meta.level = level;
    meta.character = character;
    meta.kind = FormKind::cuspidal;
    meta.provenance = provenance;
    return meta;
}

inline bool squarefree(long m)
{
    for (long p = 2; p * p <= m; ++p) {
        if (m % (p * p) == 0) {
            return false;
        }
    }
    return true;
}

} // namespace detail

/// xi_hat = theta_{1,1} D theta_{1,0} - theta_{1,0} D theta_{1,1} = -eta^6 / 2.
inline PuiseuxSeries xi_hat(const Rational &order)
{
    if (order <= make_rational(1, 4)) {
        throw error("xi_hat needs order > 1/4");
    }
    return detail::wronskian(1, 1, 0, order)
        .with_meta(detail::cusp_meta(1, "omega_1", "theta_{1,1} D theta_{1,0} - theta_{1,0} D theta_{1,1}"));
}

/// xi*_m hat = theta_{m,m} D theta_{m,0} - theta_{m,0} D theta_{m,m}
/// = m xi_hat(m tau) = -(m/2) eta^6(m tau).
inline PuiseuxSeries xi_m_star_hat(long m, const Rational &order)
{
    if (m < 1) {
        throw error("xi_m_star_hat needs m >= 1");
    }
    if (order <= make_rational(m, 4)) {
        throw error("xi_m_star_hat needs order > m/4");
    }
    const std::string ms = std::to_string(m);
    return detail::wronskian(m, m, 0, order)
        .with_meta(detail::cusp_meta(static_cast<int>(m), "omega_" + ms,
                                     "theta_{" + ms + "," + ms + "} D theta_{" + ms + ",0} - theta_{" + ms +
                                         ",0} D theta_{" + ms + "," + ms + "}"));
}

/// (xi0_hat, xi2_hat) with
///   xi0_hat = theta_{2,1} D theta_{2,0} - theta_{2,0} D theta_{2,1},
///   xi2_hat = theta_{2,1} D theta_{2,2} - theta_{2,2} D theta_{2,1}.
inline std::pair<PuiseuxSeries, PuiseuxSeries> xi_pair_hat(const Rational &order)
{
    if (order <= make_rational(5, 8)) {
        throw error("xi_pair_hat needs order > 5/8");
    }
    auto x0 = detail::wronskian(2, 1, 0, order)
                  .with_meta(detail::cusp_meta(4, "rho2", "theta_{2,1} D theta_{2,0} - theta_{2,0} D theta_{2,1}"));
    auto x2 = detail::wronskian(2, 1, 2, order)
                  .with_meta(detail::cusp_meta(4, "rho2", "theta_{2,1} D theta_{2,2} - theta_{2,2} D theta_{2,1}"));
    return {std::move(x0), std::move(x2)};
}

/// A pair (phi0, phi2) transforming with rho_2. Each component keeps its own
/// valid range; common_bound() is the range on which both are known.
struct VVPair {
    PuiseuxSeries comp0;
    PuiseuxSeries comp2;
    std::optional<Rational> weight;
    int level = 4;
    std::string character = "trivial";
    std::string representation = "rho2";
    std::string provenance;

    Rational common_bound() const
    {
        return std::min(comp0.valid_below(), comp2.valid_below());
    }
};

/// phi0 = h_{2,0} / theta_{2,1}, phi2 = h_{2,2} / theta_{2,1}.
inline VVPair lambda2_fwd(const PuiseuxSeries &h20, const PuiseuxSeries &h22)
{
    VVPair p;
    p.comp0 = detail::over_theta(h20, 2, 1);
    p.comp2 = detail::over_theta(h22, 2, 1);
    if (h20.meta()) {
        p.weight = h20.meta()->weight - make_rational(1, 2);
        p.character = h20.meta()->character;
        p.level = 2 * h20.meta()->level;
    }
    p.provenance = "(h_{2,0} / theta_{2,1}, h_{2,2} / theta_{2,1})";
    return p;
}

/// Theta components (h_0, h_1, h_2, h_3) of the inverse of lambda2:
///   h_0 = phi0 theta_{2,1}, h_1 = h_3 = -(phi0 theta_{2,0} + phi2 theta_{2,2}) / 2,
///   h_2 = phi2 theta_{2,1}.
inline std::vector<PuiseuxSeries> lambda2_components(const PuiseuxSeries &phi0, const PuiseuxSeries &phi2)
{
    using detail::times_theta;
    const PuiseuxSeries mid = CycQ(make_rational(-1, 2)) * (times_theta(phi0, 2, 0) + times_theta(phi2, 2, 2));
    return {times_theta(phi0, 2, 1), mid, times_theta(phi2, 2, 1), mid};
}

/// phi = phi0 theta_{2,1} theta^J_{2,0} - (phi0 theta_{2,0} + phi2 theta_{2,2})(theta^J_{2,1} + theta^J_{2,3}) / 2
///       + phi2 theta_{2,1} theta^J_{2,2},
/// truncated below `order` when given. Its restriction to z = 0 vanishes
/// identically. Without `order` the result is valid below
/// min(B(phi0), B(phi2) + 1/2) + 1/8.
inline JacobiSeries lambda2_inv(const VVPair &p, const std::optional<Rational> &order = std::nullopt)
{
    JacobiSeries phi = recompose(lambda2_components(p.comp0, p.comp2), 2);
    if (order) {
        phi = phi.truncated(*order);
    }
    FormMeta meta;
    if (p.weight) {
        meta.weight = *p.weight + 1;
    }
    meta.level = std::max(1, p.level / 2);
    meta.character = p.character;
    meta.index = 2;
    meta.kind = FormKind::unchecked;
    meta.provenance = "phi0 theta_{2,1} theta^J_{2,0} - (phi0 theta_{2,0} + phi2 theta_{2,2})(theta^J_{2,1} + "
                      "theta^J_{2,3})/2 + phi2 theta_{2,1} theta^J_{2,2}";
    return phi.with_meta(meta);
}

inline JacobiSeries lambda2_inv(const PuiseuxSeries &phi0, const PuiseuxSeries &phi2, const Rational &order)
{
    VVPair p;
    p.comp0 = phi0;
    p.comp2 = phi2;
    if (phi0.meta()) {
        p.weight = phi0.meta()->weight;
        p.level = 2 * phi0.meta()->level;
        p.character = phi0.meta()->character;
    }
    return lambda2_inv(p, order);
}

/// phi = h_{m,0} / theta_{m,m} = -h_{m,m} / theta_{m,0}. The two quotients
/// must agree on their common range.
inline PuiseuxSeries lambda_star_fwd(const PuiseuxSeries &hm0, const PuiseuxSeries &hmm, long m)
{
    const PuiseuxSeries a = detail::over_theta(hm0, m, m);
    const PuiseuxSeries b = -detail::over_theta(hmm, m, 0);
    const auto cmp = compare(a, b);
    if (!cmp.equal) {
        throw inconsistent_pair("h_{m,0}/theta_{m,m} and -h_{m,m}/theta_{m,0} differ at " + cmp.witness());
    }
    FormMeta meta;
    if (hm0.meta()) {
        meta = *hm0.meta();
        meta.weight = hm0.meta()->weight - make_rational(1, 2);
    }
    meta.index = 0;
    meta.kind = FormKind::unchecked;
    meta.provenance = "h_{m,0} / theta_{m,m}";
    return a.truncated(cmp.bound).with_meta(meta);
}

/// phi (theta_{m,m} theta^J_{m,0} - theta_{m,0} theta^J_{m,m}), for square-free m.
/// Without `order` the result keeps every exponent determined by phi.
inline JacobiSeries lambda_star_inv(const PuiseuxSeries &phi, long m, const std::optional<Rational> &order = std::nullopt)
{
    if (m < 1) {
        throw error("lambda_star_inv needs m >= 1");
    }
    if (!detail::squarefree(m)) {
        throw non_squarefree_index("index " + std::to_string(m) + " is not square-free");
    }
    const PuiseuxSeries h0 = detail::times_theta(phi, m, m);
    const PuiseuxSeries hm = -detail::times_theta(phi, m, 0);
    JacobiSeries res = times_theta_j(h0, m, 0) + times_theta_j(hm, m, m);
    if (order) {
        res = res.truncated(*order);
    }
    FormMeta meta;
    if (phi.meta()) {
        meta.weight = phi.meta()->weight + 1;
        meta.level = phi.meta()->level;
        meta.character = phi.meta()->character;
    }
    meta.index = static_cast<int>(m);
    meta.kind = FormKind::unchecked;
    meta.provenance = "phi (theta_{m,m} theta^J_{m,0} - theta_{m,0} theta^J_{m,m})";
    return res.with_meta(meta);
}

/// psi = phi0 / xi2_hat = -phi2 / xi0_hat, defined when phi0 xi0_hat + phi2 xi2_hat = 0.
inline PuiseuxSeries psi_form(const PuiseuxSeries &phi0, const PuiseuxSeries &phi2, const Rational &order)
{
    const Rational depth = std::max(order, std::max(phi0.valid_below(), phi2.valid_below())) + 2;
    const auto [x0, x2] = xi_pair_hat(depth);
    const PuiseuxSeries lhs = phi0 * x0 + phi2 * x2;
    if (!lhs.is_zero()) {
        throw compatibility_failed("phi0 xi0 + phi2 xi2 is nonzero at " + power_text(lhs.valuation()));
    }
    const PuiseuxSeries a = div_exact(phi0, x2);
    const PuiseuxSeries b = -div_exact(phi2, x0);
    const auto cmp = compare(a, b);
    if (!cmp.equal) {
        throw compatibility_failed("phi0/xi2 and -phi2/xi0 differ at " + cmp.witness());
    }
    FormMeta meta;
    if (phi0.meta()) {
        meta.weight = phi0.meta()->weight - 3;
        meta.level = phi0.meta()->level;
        meta.character = phi0.meta()->character;
    }
    meta.kind = FormKind::unchecked;
    meta.provenance = "phi0 / xi2";
    return a.truncated(std::min(order, cmp.bound)).with_meta(meta);
}

/// h_{m,0} theta^J_{m,0} + h_{m,m} theta^J_{m,m}; a projection.
inline JacobiSeries psi_0m(const JacobiSeries &phi, long m)
{
    const auto h = theta_decompose(phi, m);
    JacobiSeries res = (times_theta_j(h[0], m, 0) + times_theta_j(h[static_cast<std::size_t>(m)], m, m))
                           .truncated(phi.valid_below());
    if (phi.meta()) {
        FormMeta meta = *phi.meta();
        meta.provenance = "h_{m,0} theta^J_{m,0} + h_{m,m} theta^J_{m,m}";
        res = res.with_meta(meta);
    }
    return res;
}

/// (phi0, phi2) -> (phi0 / theta_{2,1}, phi2 / theta_{2,1}).
inline VVPair r3_fwd(const VVPair &p)
{
    VVPair r = p;
    r.comp0 = detail::over_theta(p.comp0, 2, 1);
    r.comp2 = detail::over_theta(p.comp2, 2, 1);
    if (p.weight) {
        r.weight = *p.weight - make_rational(1, 2);
    }
    r.provenance = "(phi0 / theta_{2,1}, phi2 / theta_{2,1})";
    return r;
}

/// (phi0, phi2) -> (phi0 theta_{2,1}, phi2 theta_{2,1}).
inline VVPair r3_inv(const VVPair &p)
{
    VVPair r = p;
    r.comp0 = detail::times_theta(p.comp0, 2, 1);
    r.comp2 = detail::times_theta(p.comp2, 2, 1);
    if (p.weight) {
        r.weight = *p.weight + make_rational(1, 2);
    }
    r.provenance = "(phi0 theta_{2,1}, phi2 theta_{2,1})";
    return r;
}

/// phi0 theta_{2,1} / theta_{2,2} = -phi2 theta_{2,1} / theta_{2,0}, defined
/// when phi0 theta_{2,0} + phi2 theta_{2,2} = 0.
inline PuiseuxSeries r4(const VVPair &p)
{
    using detail::over_theta;
    using detail::times_theta;
    const PuiseuxSeries constraint = times_theta(p.comp0, 2, 0) + times_theta(p.comp2, 2, 2);
    if (!constraint.is_zero()) {
        throw constraint_failed("phi0 theta_{2,0} + phi2 theta_{2,2} is nonzero at " +
                                power_text(constraint.valuation()));
    }
    const PuiseuxSeries a = over_theta(times_theta(p.comp0, 2, 1), 2, 2);
    const PuiseuxSeries b = -over_theta(times_theta(p.comp2, 2, 1), 2, 0);
    const auto cmp = compare(a, b);
    if (!cmp.equal) {
        throw constraint_failed("the two quotients differ at " + cmp.witness());
    }
    FormMeta meta;
    if (p.weight) {
        meta.weight = *p.weight + make_rational(1, 2);
    }
    meta.level = p.level;
    meta.character = p.character;
    meta.kind = FormKind::unchecked;
    meta.provenance = "phi0 theta_{2,1} / theta_{2,2}";
    return a.truncated(cmp.bound).with_meta(meta);
}

} // namespace jkernel
