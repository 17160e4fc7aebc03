#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "jkernel/weil.hpp"

using namespace jkernel;

namespace
{

const CycQ I = CycQ::i();
const CycQ Z8 = CycQ::root_of_unity(3);

// The displayed U_2(S T^2 S) = 1/(2i) [[1+i,0,1-i,0],[0,1-i,0,1+i],[1-i,0,1+i,0],[0,1+i,0,1-i]].
UMatrix<24> displayed_u2_st2s()
{
    const CycQ p = CycQ(1) + I, q = CycQ(1) - I;
    const CycQ s = (CycQ(2) * I).inverse();
    const CycQ rows[4][4] = {{p, 0, q, 0}, {0, q, 0, p}, {q, 0, p, 0}, {0, p, 0, q}};
    UMatrix<24> u(2);
    for (std::size_t r = 0; r < 4; ++r) {
        for (std::size_t c = 0; c < 4; ++c) {
            u.at(r, c) = s * rows[r][c];
        }
    }
    return u;
}

long long ext_gcd(long long a, long long b, long long &x, long long &y)
{
    if (b == 0) {
        x = a >= 0 ? 1 : -1;
        y = 0;
        return std::llabs(a);
    }
    long long x1 = 0, y1 = 0;
    const long long g = ext_gcd(b, a % b, x1, y1);
    x = y1;
    y = x1 - (a / b) * y1;
    return g;
}

// Random determinant-one matrix with |a|, |c| <= bound.
SL2Mat random_sl2(std::mt19937_64 &rng, long long bound)
{
    std::uniform_int_distribution<long long> dist(-bound, bound);
    while (true) {
        const long long a = dist(rng), c = dist(rng);
        if (std::gcd(a, c) != 1) {
            continue;
        }
        long long x = 0, y = 0;
        ext_gcd(a, c, x, y); // a x + c y = 1, so d = x, b = -y
        return SL2Mat(Integer(static_cast<long>(a)), Integer(static_cast<long>(-y)), Integer(static_cast<long>(c)),
                      Integer(static_cast<long>(x)));
    }
}

GroupWord gamma0_2_word(std::mt19937_64 &rng)
{
    std::uniform_int_distribution<int> len(1, 12);
    return random_gamma0_word(rng, 2, len(rng));
}

template <int N>
long double law_residual(long m, const SL2Mat &g, const UMatrix<N> &u, const SamplePoint &pt)
{
    const auto [lhs, rhs] = theta_law_sides<N>(m, g, u, pt);
    long double worst = 0, scale = 1;
    for (std::size_t i = 0; i < lhs.size(); ++i) {
        worst = std::max(worst, std::abs(lhs[i] - rhs[i]));
        scale = std::max(scale, std::abs(rhs[i]));
    }
    return worst / scale;
}

} // namespace

TEST(Weil, DisplayedGenerators)
{
    const auto t1 = u_gen(1, Gen::T);
    EXPECT_EQ(t1(0, 0), CycQ(1));
    EXPECT_EQ(t1(1, 1), I);
    const auto t2 = u_gen(2, Gen::T);
    EXPECT_EQ(t2(1, 1), Z8);
    EXPECT_EQ(t2(2, 2), CycQ(-1));
    EXPECT_EQ(t2(3, 3), Z8);
    const auto s2 = u_gen(2, Gen::S);
    EXPECT_EQ(s2 * s2, u_gen(2, Gen::minus_identity));
    const auto s1 = u_gen(1, Gen::S);
    EXPECT_EQ(s1 * s1, UMatrix<24>::identity(1).scaled(-I));
}

TEST(Weil, GeneralFormulaReproducesDisplays)
{
    for (long m : {1L, 2L}) {
        for (Gen g : {Gen::S, Gen::T, Gen::minus_identity}) {
            EXPECT_EQ(u_gen_general<24>(m, g), u_gen(m, g)) << m;
        }
    }
    const auto t3 = u_gen_general<24>(3, Gen::T);
    for (long r = 0; r < 6; ++r) {
        // e(r^2 / 12) = zeta_24^(2 r^2)
        EXPECT_EQ(t3(static_cast<std::size_t>(r), static_cast<std::size_t>(r)), CycQ::root_of_unity(2 * r * r));
    }
    EXPECT_THROW(u_gen_general<24>(5, Gen::S), unsupported_index);
    EXPECT_NO_THROW(u_gen_general<40>(5, Gen::S));
    EXPECT_THROW(u_gen(3, Gen::S), unsupported_index);
}

TEST(Weil, GeneratorsSatisfyTheLawExactly)
{
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> re(-0.5, 0.5), im(0.8, 1.5), zr(-0.2, 0.2);
    for (int t = 0; t < 10; ++t) {
        const SamplePoint pt{cplx(re(rng), im(rng)), cplx(zr(rng), zr(rng))};
        for (long m = 1; m <= 6; ++m) {
            if (m == 4 || m == 5) {
                continue;
            }
            EXPECT_LT(law_residual<24>(m, SL2Mat::T(), u_gen_general<24>(m, Gen::T), pt), 1e-15L);
            EXPECT_LT(law_residual<24>(m, SL2Mat::S(), u_gen_general<24>(m, Gen::S), pt), 1e-13L);
            EXPECT_LT(law_residual<24>(m, SL2Mat::minus_identity(), u_gen_general<24>(m, Gen::minus_identity), pt),
                      1e-15L);
        }
        EXPECT_LT(law_residual<40>(5, SL2Mat::S(), u_gen_general<40>(5, Gen::S), pt), 1e-13L);
    }
}

TEST(Weil, WordProducts)
{
    EXPECT_EQ(word_product<24>(1, GroupWord{}), UMatrix<24>::identity(1));
    const GroupWord ss{{Gen::S, 1}, {Gen::S, 1}};
    EXPECT_EQ(word_product<24>(1, ss), u_gen(1, Gen::minus_identity));
    EXPECT_EQ(word_product<24>(1, ss), UMatrix<24>::identity(1).scaled(-I));
    // (ST)^3 = -I as matrices; the plain product differs by an eighth root of unity
    const GroupWord st3 = parse_word("S T S T S T");
    EXPECT_EQ(st3.eval(), SL2Mat::minus_identity());
    const auto p = word_product<24>(1, st3);
    const auto target = u_gen(1, Gen::minus_identity);
    const CycQ lambda = p(0, 0) / target(0, 0);
    EXPECT_EQ(p, target.scaled(lambda));
    EXPECT_TRUE(lambda.pow(8).is_one());
    EXPECT_FALSE(p.resolved());
}

TEST(Weil, ResolvedStSquaredMatchesDisplay)
{
    const GroupWord w = parse_word("S T^2 S");
    const auto u = word_matrix<24>(2, w);
    EXPECT_EQ(u, displayed_u2_st2s());
    EXPECT_TRUE(in_X(u));
    EXPECT_EQ(r_char(u), -I);
}

TEST(Weil, NumericFitAgreesWithCocycle)
{
    std::mt19937_64 rng(99);
    const SamplePoint p1{cplx(0.1L, 1.2L), cplx(0.05L, 0.1L)};
    const SamplePoint p2{cplx(-0.3L, 0.9L), cplx(-0.1L, 0.02L)};
    for (Gen g : {Gen::S, Gen::T, Gen::minus_identity}) {
        const GroupWord w{{g, 1}};
        const auto fit = fit_scalar<24>(2, w.eval(), u_gen(2, g), p1);
        EXPECT_EQ(fit.root, 0);
        EXPECT_LT(fit.distance, 1e-12L);
    }
    for (int t = 0; t < 40; ++t) {
        const GroupWord w = random_sl2_word(rng, 8);
        for (long m : {1L, 2L, 3L}) {
            const auto plain = word_product<24>(m, w);
            const auto a = resolve_scalar<24>(m, w, plain, p1);
            const auto b = resolve_scalar<24>(m, w, plain, p2);
            EXPECT_EQ(a, b) << w.to_string();
            EXPECT_EQ(a, word_matrix<24>(m, w)) << w.to_string();
            EXPECT_LT(law_residual<24>(m, w.eval(), a, p2), 1e-10L);
        }
        const auto a5 = resolve_scalar<40>(5, w, word_product<40>(5, w), p1);
        EXPECT_EQ(a5, word_matrix<40>(5, w));
    }
    const GroupWord ss{{Gen::S, 1}, {Gen::S, 1}};
    EXPECT_EQ(resolve_scalar<24>(1, ss, word_product<24>(1, ss), p1), u_gen(1, Gen::minus_identity));
}

TEST(Weil, ResolutionDependsOnlyOnTheMatrix)
{
    std::mt19937_64 rng(4);
    for (int t = 0; t < 50; ++t) {
        const GroupWord w = random_sl2_word(rng, 10);
        EXPECT_EQ(word_matrix<24>(2, w), u_matrix<24>(2, w.eval())) << w.to_string();
    }
}

TEST(Weil, WordDecomposition)
{
    EXPECT_EQ(sl2_word(SL2Mat::T(5)), (GroupWord{{Gen::T, 5}}));
    EXPECT_EQ(sl2_word(SL2Mat::S()), (GroupWord{{Gen::S, 1}}));
    const SL2Mat g(2, 1, 1, 1);
    EXPECT_EQ(sl2_word(g).eval(), g);
    EXPECT_EQ(sl2_word(SL2Mat::minus_identity()).eval(), SL2Mat::minus_identity());
    std::mt19937_64 rng(13);
    for (int t = 0; t < 200; ++t) {
        const SL2Mat m = random_sl2(rng, 1000000);
        EXPECT_EQ(sl2_word(m).eval(), m) << m.to_string();
    }
    EXPECT_THROW(parse_word("S X"), parse_error);
    EXPECT_EQ(parse_word("S T^-2 -I").to_string(), "S T^-2 -I");
}

TEST(Weil, GammaM)
{
    const SL2Mat st2s = parse_word("S T^2 S").eval();
    EXPECT_EQ(st2s, SL2Mat(-1, 0, 2, -1));
    EXPECT_EQ(gamma_m(st2s, 2), SL2Mat(-1, 0, 1, -1));
    EXPECT_EQ(gamma_m(SL2Mat::T(), 2), SL2Mat::T(2));
    EXPECT_THROW(gamma_m(SL2Mat::S(), 2), not_in_group);
    std::mt19937_64 rng(21);
    for (int t = 0; t < 50; ++t) {
        for (long m : {2L, 3L, 5L}) {
            const SL2Mat a = random_gamma0_word(rng, m, 6).eval();
            const SL2Mat b = random_gamma0_word(rng, m, 6).eval();
            EXPECT_EQ(gamma_m(a * b, m), gamma_m(a, m) * gamma_m(b, m));
        }
    }
}

TEST(Weil, SubgroupXAndCharacterR)
{
    EXPECT_TRUE(in_X(u_gen(2, Gen::T)));
    EXPECT_TRUE(in_X(displayed_u2_st2s()));
    EXPECT_TRUE(in_X(u_gen(2, Gen::minus_identity)));
    EXPECT_FALSE(in_X(u_gen(2, Gen::S)));
    EXPECT_EQ(r_char(u_gen(2, Gen::T)), Z8);
    EXPECT_EQ(r_char(displayed_u2_st2s()), -I);
    EXPECT_EQ(r_char(UMatrix<24>::identity(2)), CycQ(1));
    EXPECT_THROW(r_char(u_gen(2, Gen::S)), not_in_group);
}

TEST(Weil, RandomGamma0Words)
{
    std::mt19937_64 rng(77);
    for (int t = 0; t < 200; ++t) {
        const GroupWord a = gamma0_2_word(rng), b = gamma0_2_word(rng);
        const auto ua = word_matrix<24>(2, a), ub = word_matrix<24>(2, b);
        const auto uab = word_matrix<24>(2, a * b);
        ASSERT_TRUE(in_X(ua)) << a.to_string();
        ASSERT_TRUE(in_X(uab));
        // r is a character on X
        EXPECT_EQ(r_char(ua * ub), r_char(ua) * r_char(ub));
        // the true matrices multiply up to the metaplectic sign
        const int sign = detail::metaplectic_sign(a.eval(), b.eval());
        EXPECT_EQ(uab, (ua * ub).scaled(CycQ(sign)));
        EXPECT_EQ(r_char(uab), r_char(ua) * r_char(ub) * CycQ(sign));
    }
    // the sign is genuinely there: r(U_2(-I))^2 = -1 while r(U_2(I)) = 1
    const auto mi = u_gen(2, Gen::minus_identity);
    EXPECT_EQ(r_char(mi) * r_char(mi), CycQ(-1));
}

TEST(Weil, Rho2)
{
    EXPECT_EQ(rho2(SL2Mat::minus_identity()), UMatrix<24>::identity(1).scaled(CycQ(-1)));
    EXPECT_EQ(rho2(SL2Mat()), UMatrix<24>::identity(1));
    std::mt19937_64 rng(31);
    for (int t = 0; t < 50; ++t) {
        const SL2Mat a = gamma0_2_word(rng).eval(), b = gamma0_2_word(rng).eval();
        EXPECT_EQ(rho2(a * b), rho2(a) * rho2(b));
    }
}

TEST(Weil, OmegaCharacter)
{
    EXPECT_EQ(omega_m(SL2Mat::T(), 1), I);
    EXPECT_EQ(omega_m(SL2Mat::S(), 1), I);
    std::mt19937_64 rng(8);
    for (int t = 0; t < 50; ++t) {
        for (long m : {1L, 2L}) {
            const SL2Mat a = random_gamma0_word(rng, m, 8).eval(), b = random_gamma0_word(rng, m, 8).eval();
            EXPECT_EQ(omega_m(a * b, m), omega_m(a, m) * omega_m(b, m));
        }
    }
}

TEST(Weil, CuspEntries)
{
    for (long c = 1; c <= 20; ++c) {
        const auto [e00, e20] = cusp_entry_values(c);
        const CycQ p = cusp_entry_pattern(c, 1), q = cusp_entry_pattern(c, -1);
        // both entries are one common constant times the two patterns
        EXPECT_EQ(e00 * q, e20 * p) << c;
        if (!p.is_zero()) {
            EXPECT_EQ((e00 / p) * (e00 / p), CycQ(make_rational(-1, 16))) << c;
        }
        if (c % 2 == 1 || c % 4 == 2) {
            EXPECT_FALSE(e00.is_zero()) << c;
            EXPECT_FALSE(e20.is_zero()) << c;
        } else {
            EXPECT_TRUE(e00.is_zero() || e20.is_zero()) << c;
        }
    }
}

TEST(Weil, BlockStructure)
{
    std::mt19937_64 rng(5);
    for (int t = 0; t < 20; ++t) {
        for (long m : {2L, 3L, 6L}) {
            const auto rep = block_structure<24>(m, random_gamma0_word(rng, m, 5));
            EXPECT_TRUE(rep.zero_pattern) << rep.detail;
            EXPECT_TRUE(rep.proportional) << rep.detail;
        }
        const auto rep5 = block_structure<40>(5, random_gamma0_word(rng, 5, 5));
        EXPECT_TRUE(rep5.zero_pattern) << rep5.detail;
        EXPECT_TRUE(rep5.proportional) << rep5.detail;
    }
    EXPECT_THROW(block_structure<24>(2, parse_word("S")), not_in_group);
}
