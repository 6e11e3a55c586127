#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "bdpe/chain.hpp"
#include "bdpe/mm1m.hpp"
#include "bdpe/passage.hpp"
#include "bdpe/poisson.hpp"
#include "helpers.hpp"

using namespace bdpe;
using bdpe_test::rel_diff;

TEST_CASE("kernel series sums factorial reciprocals at unit parameters") {
    // S(1, 1) = sum 1/(k+1)! = e - 1.
    CHECK(rel_diff(mm1m_series(1.0, 1.0), std::exp(1.0) - 1.0) < 1e-15);
    // S(a, kappa) satisfies a S(a) - kappa S(a+1) = 1.  The difference
    // cancels down from terms of size a S(a), so the achievable accuracy
    // scales with that magnitude (~6e4 at a = 0.5, kappa = 25).
    for (double a : {0.5, 2.0, 7.3}) {
        for (double kappa : {0.3, 1.8, 25.0}) {
            const double scale = a * mm1m_series(a, kappa);
            const double lhs = scale - kappa * mm1m_series(a + 1.0, kappa);
            REQUIRE(std::fabs(lhs - 1.0) < 1e-13 * std::max(1.0, scale));
        }
    }
}

TEST_CASE("kernel series domain checks") {
    CHECK_THROWS_AS(mm1m_series(-1.0, 1.0), DomainError);
    CHECK_THROWS_AS(mm1m_series(1.0, 0.0), DomainError);
    CHECK_THROWS_AS(mm1m_series(1.0, 700.0), DomainError);
    CHECK_THROWS_AS(Mm1mParams(0.9, 0.0, 0.5), DomainError);
}

TEST_CASE("closed-form mean cost of the reference instance") {
    const Mm1mParams q(0.9, 1.0, 0.5);
    CHECK(mm1m_zeta(q) == 0.39851561369062397);
    CHECK(rel_diff(mm1m_zeta(q), 0.398515613690624) < 1e-14);
    CHECK(q.alpha() == 2.0);
    CHECK(q.kappa() == 1.8);
}

TEST_CASE("closed-form marginal values match the table solution") {
    const Mm1mParams q(0.9, 1.0, 0.5);
    const ChainTables<double> t = build_tables(make_mm1m_analytic(0.9, 1.0, 0.5), TruncationPolicy{});
    const PassageTables<double> passage = build_passage(t);
    const PoissonSolution<double> exact = solve_exact(t, passage, 0.0);
    // phi_0 = zeta / lambda.
    CHECK(rel_diff(mm1m_phi(q, 0), mm1m_zeta(q) / 0.9) < 1e-14);
    for (state_t n = 0; n <= 30; ++n) {
        REQUIRE(rel_diff(mm1m_phi(q, n), exact.phi[std::size_t(n)]) < 1e-13);
        REQUIRE(mm1m_phi(q, n) < 1.0);
        if (n >= 1) REQUIRE(mm1m_phi(q, n) > mm1m_phi(q, n - 1));
    }
}

TEST_CASE("closed-form steady state matches the table solution") {
    const Mm1mParams q(0.9, 1.0, 0.5);
    const ChainTables<double> t = build_tables(make_mm1m_analytic(0.9, 1.0, 0.5), TruncationPolicy{});
    CHECK(rel_diff(mm1m_steady(q, 0), 0.49851561369062397) < 1e-15);
    for (state_t n = 0; n <= 20; ++n)
        REQUIRE(rel_diff(mm1m_steady(q, n), t.p[std::size_t(n)]) < 1e-13);
    CompensatedSum<double> mass;
    for (state_t n = 0; n <= 100; ++n) mass.add(mm1m_steady(q, n));
    CHECK(rel_diff(mass.value(), 1.0) < 1e-14);
}

TEST_CASE("analytic factory attaches the closed-form mean cost") {
    const BirthDeathModel<double> m = make_mm1m_analytic(0.9, 1.0, 0.5);
    REQUIRE(m.analytic_zeta.has_value());
    CHECK(*m.analytic_zeta == mm1m_zeta(Mm1mParams(0.9, 1.0, 0.5)));
    CHECK_FALSE(make_mm1m(0.9, 1.0, 0.5).analytic_zeta.has_value());
}

TEST_CASE("regularized incomplete gamma reference values") {
    CHECK(rel_diff(reg_gamma(1.0, 1.0).first, 1.0 - std::exp(-1.0)) < 1e-15);
    CHECK(reg_gamma(3.0, 0.0).first == 0.0);
    CHECK(reg_gamma(3.0, 0.0).second == 1.0);
    // P(1/2, x^2) = erf(x).
    for (double x : {0.25, 0.5, 1.0, 2.0, 3.5})
        REQUIRE(rel_diff(reg_gamma(0.5, x * x).first, std::erf(x)) < 1e-14);
    CHECK_THROWS_AS(reg_gamma(0.0, 1.0), DomainError);
    CHECK_THROWS_AS(reg_gamma(1.0, -1.0), DomainError);
}

TEST_CASE("incomplete gamma pair sums to one across the parameter grid") {
    for (int i = 0; i < 10; ++i) {
        for (int j = 0; j < 10; ++j) {
            const double a = 0.1 * std::pow(10.0, 0.3 * i);       // 0.1 .. ~80
            const double x = 1e-3 * std::pow(10.0, 0.5 * j);      // 1e-3 .. ~30
            const auto [p, q] = reg_gamma(a, x);
            REQUIRE(p >= 0.0);
            REQUIRE(q >= 0.0);
            REQUIRE(std::fabs(p + q - 1.0) <= 2.0 * std::numeric_limits<double>::epsilon());
        }
    }
}

TEST_CASE("cumulative steady state through the incomplete gamma ratio") {
    const Mm1mParams q(0.9, 1.0, 0.5);
    const ChainTables<double> t = build_tables(make_mm1m_analytic(0.9, 1.0, 0.5), TruncationPolicy{});
    for (state_t n = 0; n <= 20; ++n)
        REQUIRE(rel_diff(mm1m_cumulative(q, n), t.P[std::size_t(n)]) < 1e-12);
}
