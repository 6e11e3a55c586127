#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "bdpe/chain.hpp"
#include "bdpe/mm1m.hpp"
#include "bdpe/passage.hpp"
#include "bdpe/poisson.hpp"
#include "helpers.hpp"
#include "published_values.hpp"

using namespace bdpe;
using bdpe_test::make_geometric_queue;
using bdpe_test::rel_diff;

namespace {

struct Instance {
    ChainTables<double> tables;
    PassageTables<double> passage;
};

Instance abandonment(state_t min_stored = 0) {
    Instance i;
    i.tables = build_tables(make_mm1m_analytic(0.9, 1.0, 0.5), TruncationPolicy{}, min_stored);
    i.passage = build_passage(i.tables);
    return i;
}

}  // namespace

TEST_CASE("constant costs make every marginal value zero") {
    BirthDeathModel<double> m = make_geometric_queue(1.0, 2.0);
    m.cost = [](state_t) { return 1.0; };
    const ChainTables<double> t = build_tables(m, TruncationPolicy{});
    const PassageTables<double> passage = build_passage(t);

    const PoissonSolution<double> exact = solve_exact(t, passage, 0.5, std::optional<double>(1.0));
    for (double f : exact.phi) REQUIRE(std::fabs(f) < 1e-15);
    // Forward with the exact input is identically zero, so b stays at b0.
    const PoissonSolution<double> fwd = solve_forward(t, 1.0, 30, 0.5);
    for (double f : fwd.phi) REQUIRE(f == 0.0);
    for (double b : fwd.b) REQUIRE(b == 0.5);
}

TEST_CASE("geometric queue marginal values are linear in the state") {
    const ChainTables<double> t = build_tables(make_geometric_queue(1.0, 2.0), TruncationPolicy{});
    const PassageTables<double> passage = build_passage(t);
    const PoissonSolution<double> exact = solve_exact(t, passage, 0.0);
    for (std::size_t n = 0; n <= 50; ++n) REQUIRE(rel_diff(exact.phi[n], double(n) + 1.0) < 1e-12);
}

TEST_CASE("accumulated column starts at the seed and adds marginals") {
    const Instance a = abandonment();
    const PoissonSolution<double> s = solve_exact(a.tables, a.passage, 0.25);
    REQUIRE(s.b[0] == 0.25);
    REQUIRE(s.b.size() == s.phi.size() + 1);
    for (std::size_t n = 0; n + 1 < s.b.size() && n < 10; ++n)
        REQUIRE(rel_diff(s.b[n + 1], s.b[n] + s.phi[n]) < 1e-13);
}

TEST_CASE("closed-form solution satisfies the balance recurrence") {
    const Instance a = abandonment();
    const PoissonSolution<double> s = solve_exact(a.tables, a.passage, 0.0);
    const double z = s.z_input;
    for (std::size_t n = 1; n <= 10; ++n) {
        const double residual =
            a.tables.lam[n] * s.phi[n] - a.tables.mu[n] * s.phi[n - 1] - (z - a.tables.c[n]);
        REQUIRE(std::fabs(residual) < 1e-8);
    }
}

TEST_CASE("forward recurrence is affine in the input") {
    const Instance a = abandonment();
    const double z = *a.tables.analytic_zeta;
    const PoissonSolution<double> f1 = solve_forward(a.tables, z + 0.01, 30, 0.0);
    const PoissonSolution<double> f2 = solve_forward(a.tables, z - 0.005, 30, 0.0);
    for (std::size_t n = 0; n <= 30; ++n)
        REQUIRE(rel_diff(f1.phi[n] - f2.phi[n], a.passage.T_up[n] * 0.015) < 1e-11);
}

TEST_CASE("backward recurrence keeps the frontier seed and damps it downward") {
    const Instance a = abandonment();
    const double z = *a.tables.analytic_zeta;
    const PoissonSolution<double> b0 = solve_backward(a.tables, z, 40, 0.0, 0.0);
    const PoissonSolution<double> b1 = solve_backward(a.tables, z, 40, 1.0, 0.0);
    REQUIRE(b0.phi[40] == 0.0);
    REQUIRE(b1.phi[40] == 1.0);
    // A unit seed difference at the frontier is invisible at the bottom.
    CHECK(std::fabs(b1.phi[0] - b0.phi[0]) < 1e-12);
}

TEST_CASE("crossover indices of the abandonment instance") {
    const Instance a = abandonment();
    CHECK(phi_crossover(a.tables) == 1);
    CHECK(b_crossover(a.passage) == 2);
    const PoissonSolution<double> s =
        solve_mixed(a.tables, a.passage, *a.tables.analytic_zeta, 42, 0.0, 0.0);
    CHECK(s.crossover_m == 1);
    CHECK(s.crossover_M == 2);
}

TEST_CASE("mixed scheme splices forward and backward columns at the crossovers") {
    const Instance a = abandonment(42);
    const double z = *a.tables.analytic_zeta;
    const PoissonSolution<double> fwd = solve_forward(a.tables, z, 42, 0.0);
    const PoissonSolution<double> bwd = solve_backward(a.tables, z, 42, 0.0, 0.0);
    const PoissonSolution<double> mix = solve_mixed(a.tables, a.passage, z, 42, 0.0, 0.0);
    for (std::size_t n = 0; n <= 42; ++n)
        REQUIRE(mix.phi[n] == (state_t(n) < mix.crossover_m ? fwd.phi[n] : bwd.phi[n]));
    for (std::size_t n = 0; n <= 43; ++n)
        REQUIRE(mix.b[n] == (state_t(n) < mix.crossover_M ? fwd.b[n] : bwd.b[n]));
}

TEST_CASE("forward instability reference values") {
    const Instance a = abandonment();
    const double z0 = *a.tables.analytic_zeta;
    const PoissonSolution<double> f0 = solve_forward(a.tables, z0, 29, 0.0);
    CHECK(rel_diff(f0.phi[19], 0.9486149432366413) < 1e-13);
    CHECK(rel_diff(f0.phi[20], 0.9258666547707526) < 1e-13);
    CHECK(rel_diff(f0.phi[22], -3.690802746947038) < 1e-13);
    CHECK(rel_diff(f0.phi[29], -1006169851.2840656) < 1e-13);
    const PoissonSolution<double> f1 = solve_forward(a.tables, perturb_ulps(z0, 1), 29, 0.0);
    CHECK(rel_diff(f1.phi[29], 32219007623.902565) < 1e-13);
}

TEST_CASE("mixed scheme reference values at frontier 42") {
    const Instance a = abandonment(42);
    const PoissonSolution<double> s =
        solve_mixed(a.tables, a.passage, *a.tables.analytic_zeta, 42, 0.0, 0.0);
    CHECK(rel_diff(s.phi[12], 0.9251743422375036) < 1e-14);
    CHECK(rel_diff(s.phi[29], 0.9670484460178728) < 1e-14);
}

TEST_CASE("ranges past the stored states are rejected") {
    const Instance a = abandonment();
    const double z = *a.tables.analytic_zeta;
    CHECK_THROWS_AS(solve_forward(a.tables, z, a.tables.n_stored() + 1, 0.0), FrontierTooSmallError);
    CHECK_THROWS_AS(solve_backward(a.tables, z, a.tables.n_stored() + 1, 0.0, 0.0), FrontierTooSmallError);
    CHECK_THROWS_AS(solve_forward(a.tables, z, -1, 0.0), FrontierTooSmallError);
}

TEST_CASE("automatic frontier choice obeys the seed-decay rule") {
    const Instance a = abandonment();
    const state_t N = default_frontier(a.tables, a.passage);
    REQUIRE(N <= a.tables.n_stored());
    CHECK(a.tables.lam[std::size_t(N)] * a.tables.p[std::size_t(N)] * a.passage.T_n0[std::size_t(N)] < 1e-20);
    CHECK(a.tables.lam[std::size_t(N) - 1] * a.tables.p[std::size_t(N) - 1] *
              a.passage.T_n0[std::size_t(N) - 1] >= 1e-20);
}

TEST_CASE("automatic frontier choice fails on short shallow tables") {
    std::vector<double> lam(40, 0.5), mu(40, 1.0), cost(40, 1.0);
    TruncationPolicy policy;
    policy.tail_mass_tol = 1e-3;
    const ChainTables<double> t = build_tables(make_tabulated(lam, mu, cost), policy);
    const PassageTables<double> passage = build_passage(t);
    CHECK_THROWS_AS(default_frontier(t, passage), FrontierTooSmallError);
}
