#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "jkernel/io.hpp"
#include "jkernel/verify.hpp"

using namespace jkernel;

namespace
{

Rational R(long p, long q = 1)
{
    return make_rational(p, q);
}

std::vector<SamplePoint> points(int n, unsigned seed = 1)
{
    std::mt19937_64 rng(seed);
    return detail::sample_points(rng, n);
}

long double residual_value(const CheckReport &r)
{
    // witness starts with "max residual <x>"
    return std::stold(r.witness.substr(std::string("max residual ").size()));
}

} // namespace

TEST(Verify, EvalSeriesOracles)
{
    EXPECT_NEAR(std::abs(eval_series(PuiseuxSeries::monomial(CycQ(1), R(0), R(30)), cplx(0.2L, 1.0L)) - cplx(1)), 0,
                1e-18);
    // theta_{1,0}(tau) = sum_n q^(n^2), compared with direct summation at tau = i and tau = i/2
    const auto direct = [](long double y) {
        long double s = 0;
        for (int n = -30; n <= 30; ++n) {
            s += std::exp(-2.0L * 3.14159265358979323846L * y * n * n);
        }
        return s;
    };
    const cplx v = eval_series(theta_series(1, 0, R(30)), cplx(0, 1));
    EXPECT_LT(std::abs(v - direct(1)), 1e-15);
    EXPECT_NEAR(static_cast<double>(v.real()), 1.0037348854877390, 1e-15);
    const cplx half = eval_series(theta_series(1, 0, R(60)), cplx(0, 0.5L));
    EXPECT_LT(std::abs(half - direct(0.5L)), 1e-15);
    EXPECT_NEAR(static_cast<double>(half.real()), 1.0864348112, 1e-10);
    // eta(-1/tau) = sqrt(-i tau) eta(tau)
    const cplx tau(0.3L, 1.1L);
    const cplx lhs = eval_series(eta(R(40)), -cplx(1) / tau);
    const cplx rhs = std::sqrt(cplx(0, -1) * tau) * eval_series(eta(R(40)), tau);
    EXPECT_LT(std::abs(lhs - rhs), 1e-12);
    EXPECT_LT(std::abs(eta_value(tau) - eval_series(eta(R(40)), tau)), 1e-15);
    EXPECT_THROW(eval_series(theta_series(1, 0, R(3)), cplx(0, 0.3L)), tail_too_large);
}

TEST(Verify, ThetaTransformLaw)
{
    const auto pts = points(10);
    const auto t = check_theta_transform<24>(2, {GroupWord{{Gen::T, 1}}}, pts);
    EXPECT_TRUE(t.passed);
    EXPECT_LT(residual_value(t), 1e-12);
    const auto s = check_theta_transform<24>(1, {GroupWord{{Gen::S, 1}}}, pts);
    EXPECT_TRUE(s.passed) << s.witness;
    std::mt19937_64 rng(4);
    std::vector<GroupWord> words;
    for (int i = 0; i < 10; ++i) {
        words.push_back(random_gamma0_word_bounded(rng, 2, 12));
    }
    EXPECT_TRUE(check_theta_transform<24>(2, words, pts).passed);
    // a matrix off by a root of unity must be rejected
    const GroupWord st2s = parse_word("S T^2 S");
    const UMatrix<24> wrong = word_matrix<24>(2, st2s).scaled(CycQ::i());
    long double worst = 0;
    for (const auto &pt : pts) {
        const auto [l, r] = theta_law_sides<24>(2, st2s.eval(), wrong, pt);
        worst = std::max(worst, detail::relative_residual(l, r));
    }
    EXPECT_GT(worst, 0.5);
}

TEST(Verify, VectorValuedXiLaw)
{
    const auto pts = points(10, 2);
    const auto id = check_vvcf_transform({GroupWord{}}, pts);
    EXPECT_TRUE(id.passed);
    EXPECT_EQ(residual_value(id), 0);
    const auto t = check_vvcf_transform({GroupWord{{Gen::T, 1}}}, pts);
    EXPECT_LT(residual_value(t), 1e-12);
    EXPECT_TRUE(check_vvcf_transform({parse_word("S T^2 S")}, pts).passed);
    EXPECT_TRUE(check_rho2_pair({parse_word("S T^2 S"), GroupWord{{Gen::T, 1}}}, pts).passed);
}

TEST(Verify, WeightAndCharacter)
{
    const auto pts = points(10, 3);
    const auto xi2 = [](const cplx &t) { return detail::xi_star_value(2, t); };
    const auto omega2 = [](const SL2Mat &g) { return omega_m(g, 2); };
    const std::vector<GroupWord> words{GroupWord{{Gen::T, 1}}, parse_word("S T^2 S")};
    EXPECT_TRUE(check_weight_char("xi2", xi2, R(3), omega2, words, pts).passed);
    // the conjugate character is wrong at T
    const auto conj2 = [](const SL2Mat &g) { return omega_m(g, 2).conj(); };
    EXPECT_FALSE(check_weight_char("xi2", xi2, R(3), conj2, words, pts).passed);
    const auto eta6 = [](const cplx &t) { return std::pow(eta_value(t), 6); };
    const auto omega1 = [](const SL2Mat &g) { return omega_m(g, 1); };
    EXPECT_TRUE(check_weight_char("eta6", eta6, R(3), omega1, {GroupWord{{Gen::S, 1}}, GroupWord{{Gen::T, 1}}}, pts)
                    .passed);
    // the formal series agrees with the Wronskian values
    const cplx tau0(0.1L, 0.9L);
    EXPECT_LT(std::abs(eval_series(xi_m_star_hat(2, R(30)), tau0) - xi2(tau0)), 1e-15);
}

TEST(Verify, CuspSampler)
{
    const std::vector<long double> heights{2, 4, 8, 10, 12, 16, 20};
    const auto th = cusp_bound_sample("t", {theta_series(1, 0, R(200))}, SL2Mat::S(), R(1, 2), heights);
    EXPECT_TRUE(th.passed) << th.witness;
    EXPECT_TRUE(th.evidence);
    const auto e6 = cusp_bound_sample("e", {pow(eta(R(240)), 6)}, SL2Mat::S(), R(3), heights);
    EXPECT_TRUE(e6.passed);
    // q^-1 grows like exp(2 pi y) at the cusp at infinity
    const auto grow = cusp_bound_sample("g", {PuiseuxSeries::monomial(CycQ(1), R(-1), R(40))}, SL2Mat(), R(0), heights);
    EXPECT_FALSE(grow.passed);
    EXPECT_THROW(cusp_bound_sample("x", {theta_series(1, 0, R(200))}, SL2Mat::S(), R(1, 2), {1, 2}), error);
}

TEST(Verify, IdentityCatalogue)
{
    for (const auto &name : identity_catalogue()) {
        const auto rep = run_identity(name, R(20));
        EXPECT_TRUE(rep.passed) << name << ": " << rep.witness;
        EXPECT_EQ(*rep.order, R(20));
    }
    EXPECT_EQ(run_identity("xi-bridge", R(20)).witness, "c = 1");
    EXPECT_EQ(run_identity("d2-lambdastar", R(12)).witness, "C(1) = 4, C(2) = 8, C(3) = 12, C(5) = 20");
    EXPECT_THROW(run_identity("nope", R(10)), error);
}

TEST(Verify, FormalReportWitness)
{
    const auto a = PuiseuxSeries::monomial(CycQ(1), R(1), R(10));
    const auto b = PuiseuxSeries::monomial(CycQ(2), R(1), R(10));
    const auto rep = detail::formal_report("x", R(5), compare(a, b));
    EXPECT_FALSE(rep.passed);
    EXPECT_EQ(rep.witness, "first difference at q^1");
    const auto shallow = detail::formal_report("x", R(20), compare(a, a));
    EXPECT_FALSE(shallow.passed);
    EXPECT_FALSE(shallow.witness.empty());
}

TEST(Verify, SuitesAreSortedAndSeeded)
{
    const auto a = run_suite("weil", R(20), 7);
    ASSERT_FALSE(a.empty());
    EXPECT_TRUE(std::is_sorted(a.begin(), a.end(), [](auto &x, auto &y) { return x.name < y.name; }));
    EXPECT_TRUE(all_passed(a));
    const auto b = run_suite("weil", R(20), 7);
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(to_json(a[i]).dump(), to_json(b[i]).dump());
        EXPECT_FALSE(a[i].ms.has_value());
    }
    EXPECT_THROW(run_suite("bogus", R(20), 7), error);
}

TEST(Io, CyclotomicRoundTrip)
{
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<long> d(-50, 50);
    for (int t = 0; t < 100; ++t) {
        CycQ::coords_type c;
        for (auto &x : c) {
            x = make_rational(d(rng), 1 + std::abs(d(rng)));
        }
        const CycQ x(c);
        EXPECT_EQ(cyclotomic_from_json<24>(to_json(x)), x);
    }
    const json half = to_json(CycQ(make_rational(1, 2)) + CycQ::i().scaled(make_rational(1, 3)));
    EXPECT_EQ(half.dump(), R"({"num":[3,0,0,0,0,0,2,0],"den":6})");
    const CycQ big(Rational(Integer("123456789012345678901234567890")));
    const json bj = to_json(big);
    EXPECT_TRUE(bj["num"][0].is_string());
    EXPECT_EQ(cyclotomic_from_json<24>(bj), big);
    const auto s10 = sqrt_positive_integer<40>(10);
    EXPECT_EQ(to_json(s10)["conductor"], 40);
    EXPECT_EQ(cyclotomic_from_json<40>(to_json(s10)), s10);
    EXPECT_THROW(cyclotomic_from_json<24>(json::parse(R"({"num":[1],"den":1})")), parse_error);
    EXPECT_THROW(cyclotomic_from_json<24>(json::parse(R"({"num":[1,0,0,0,0,0,0,0],"den":0})")), parse_error);
}

TEST(Io, SeriesAndPairRoundTrip)
{
    const auto xi = xi_hat(R(12));
    const auto back = series_from_json(json::parse(to_json(xi).dump()));
    EXPECT_EQ(back.terms(), xi.terms());
    EXPECT_EQ(back.valid_below(), xi.valid_below());
    EXPECT_EQ(*back.meta(), *xi.meta());
    EXPECT_EQ(to_json(back).dump(), to_json(xi).dump());

    const auto th = theta_j(3, 2, R(49, 8));
    const auto jb = jacobi_from_json(json::parse(to_json(th).dump()));
    EXPECT_EQ(jb.terms(), th.terms());
    EXPECT_EQ(jb.valid_below(), R(49, 8));

    const auto [x0, x2] = xi_pair_hat(R(6));
    VVPair p{x0, x2, R(3), 4, "trivial", "rho2", "pair"};
    const auto pb = pair_from_json(to_json(p));
    EXPECT_EQ(to_json(pb).dump(), to_json(p).dump());
    EXPECT_THROW(series_from_json(json::parse(R"({"valid_below":"1","terms":[{"exp":"2","coeff":{"num":[1,0,0,0,0,0,0,0],"den":1}}]})")),
                 parse_error);
}

TEST(Io, MatricesAndReports)
{
    const auto u = word_matrix<24>(2, parse_word("S T^2 S"));
    const auto ub = umatrix_from_json<24>(json::parse(to_json(u).dump()));
    EXPECT_EQ(ub, u);
    EXPECT_TRUE(ub.resolved());
    const auto u5 = word_product<40>(5, parse_word("S T"));
    EXPECT_EQ(umatrix_from_json<40>(to_json(u5)), u5);

    CheckReport r{"eta3", true, R(30), {}, ""};
    EXPECT_EQ(to_json(r).dump(), R"({"name":"eta3","status":"pass","bound":"30","witness":"","ms":null,"evidence":false})");
    CheckReport n{"theta-transform", false, {}, 1e-9L, "max residual 1.000e+00"};
    const json nj = to_json(n);
    EXPECT_EQ(nj["status"], "fail");
    EXPECT_DOUBLE_EQ(nj["bound"].get<double>(), 1e-9);
}
