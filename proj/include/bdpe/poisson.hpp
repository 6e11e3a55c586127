#pragma once

#include <optional>
#include <vector>

#include "bdpe/chain.hpp"
#include "bdpe/errors.hpp"
#include "bdpe/passage.hpp"
#include "bdpe/summation.hpp"

namespace bdpe {

enum class Scheme { Exact, Forward, Backward, Mixed };

template <class Real>
struct PoissonSolution {
    Scheme scheme{Scheme::Exact};
    Real z_input{};
    state_t N{-1};        // frontier, backward/mixed only
    Real phi_NN{};        // backward boundary seed
    Real b0{};
    std::vector<Real> phi;  // marginal values, index 0..len
    std::vector<Real> b;    // accumulated values, index 0..len+1, b[0] = b0
    state_t crossover_m{-1};  // first n with Pbar_n < P_n (mixed only)
    state_t crossover_M{-1};  // first n >= 1 with T_n0 < T_0n (mixed only)
};

/// b[0] = b0, b[n+1] = b[n] + phi[n], carried with a compensated accumulator.
template <class Real>
std::vector<Real> accumulate_b(const std::vector<Real>& phi, Real b0) {
    std::vector<Real> b;
    b.reserve(phi.size() + 1);
    CompensatedSum<Real> acc(b0);
    b.push_back(acc.value());
    for (const Real& f : phi) {
        acc.add(f);
        b.push_back(acc.value());
    }
    return b;
}

template <class Real>
state_t phi_crossover(const ChainTables<Real>& t) {
    for (std::size_t n = 0; n < t.p.size(); ++n)
        if (t.P_bar[n] < t.P[n]) return state_t(n);
    return t.n_stored();
}

template <class Real>
state_t b_crossover(const PassageTables<Real>& passage) {
    for (std::size_t n = 1; n < passage.T_0n.size(); ++n)
        if (passage.T_n0[n] < passage.T_0n[n]) return state_t(n);
    return state_t(passage.T_0n.size()) - 1;
}

/// Closed-form solution.  Below the probability crossover the head form
/// (z P_n - C_n)/(lam_n p_n) is safe; at and past it the algebraically equal
/// tail form (Cbar_n - z Pbar_n)/(lam_n p_n) must be used, because the head
/// difference cancels catastrophically once both P_n -> 1 and C_n -> z.
template <class Real>
PoissonSolution<Real> solve_exact(const ChainTables<Real>& t, const PassageTables<Real>& passage,
                                  Real b0, std::optional<Real> zeta_in = {}) {
    (void)passage;
    PoissonSolution<Real> s;
    s.scheme = Scheme::Exact;
    s.b0 = b0;
    if (zeta_in)
        s.z_input = *zeta_in;
    else if (t.analytic_zeta)
        s.z_input = *t.analytic_zeta;
    else
        s.z_input = t.zeta;
    const Real z = s.z_input;
    const state_t m = phi_crossover(t);
    s.phi.resize(t.p.size());
    for (std::size_t n = 0; n < t.p.size(); ++n) {
        const Real d = t.lam[n] * t.p[n];
        s.phi[n] = (state_t(n) < m) ? (z * t.P[n] - t.C[n]) / d
                                    : (t.C_bar[n] - z * t.P_bar[n]) / d;
    }
    s.b = accumulate_b(s.phi, b0);
    return s;
}

/// Forward recurrence from state 0.  Amplifies any error in z by T_n^+, so
/// it is only trustworthy while P_n <= Pbar_n.
template <class Real>
PoissonSolution<Real> solve_forward(const ChainTables<Real>& t, Real z, state_t nmax, Real b0) {
    if (nmax < 0 || nmax > t.n_stored())
        throw FrontierTooSmallError("forward range exceeds stored states");
    PoissonSolution<Real> s;
    s.scheme = Scheme::Forward;
    s.z_input = z;
    s.b0 = b0;
    s.phi.resize(std::size_t(nmax) + 1);
    s.phi[0] = (z - t.c[0]) / t.lam[0];
    for (state_t n = 1; n <= nmax; ++n)
        s.phi[std::size_t(n)] = (z - t.c[std::size_t(n)] + t.mu[std::size_t(n)] * s.phi[std::size_t(n) - 1]) /
                                t.lam[std::size_t(n)];
    s.b = accumulate_b(s.phi, b0);
    return s;
}

/// Backward recurrence from a seeded frontier N downward; the seed error is
/// damped rather than amplified.
template <class Real>
PoissonSolution<Real> solve_backward(const ChainTables<Real>& t, Real z, state_t N, Real phi_NN,
                                     Real b0) {
    if (N < 0 || N > t.n_stored())
        throw FrontierTooSmallError("backward frontier exceeds stored states");
    PoissonSolution<Real> s;
    s.scheme = Scheme::Backward;
    s.z_input = z;
    s.N = N;
    s.phi_NN = phi_NN;
    s.b0 = b0;
    s.phi.resize(std::size_t(N) + 1);
    s.phi[std::size_t(N)] = phi_NN;
    // The sweep is carried at promoted precision and each value rounded once
    // on output; the damping keeps the carried trajectory's own error far
    // below the final rounding, so the stored phi are correctly rounded.
    using W = promoted_t<Real>;
    W cur = W(phi_NN);
    for (state_t n = N; n >= 1; --n) {
        cur = (W(t.c[std::size_t(n)]) - W(z)) / W(t.mu[std::size_t(n)]) +
              (W(t.lam[std::size_t(n)]) / W(t.mu[std::size_t(n)])) * cur;
        s.phi[std::size_t(n) - 1] = Real(cur);
    }
    s.b = accumulate_b(s.phi, b0);
    return s;
}

/// Forward values below the probability crossover m, backward values from m
/// on; the b column switches independently at the passage-time crossover M.
template <class Real>
PoissonSolution<Real> solve_mixed(const ChainTables<Real>& t, const PassageTables<Real>& passage,
                                  Real z, state_t N, Real phi_NN, Real b0) {
    const PoissonSolution<Real> fwd = solve_forward(t, z, N, b0);
    const PoissonSolution<Real> bwd = solve_backward(t, z, N, phi_NN, b0);
    PoissonSolution<Real> s;
    s.scheme = Scheme::Mixed;
    s.z_input = z;
    s.N = N;
    s.phi_NN = phi_NN;
    s.b0 = b0;
    s.crossover_m = phi_crossover(t);
    s.crossover_M = b_crossover(passage);
    if (s.crossover_m > s.crossover_M)
        throw DomainError("probability crossover exceeded passage-time crossover; tables are inconsistent");
    s.phi.resize(std::size_t(N) + 1);
    for (state_t n = 0; n <= N; ++n)
        s.phi[std::size_t(n)] = (n < s.crossover_m) ? fwd.phi[std::size_t(n)] : bwd.phi[std::size_t(n)];
    s.b.resize(std::size_t(N) + 2);
    for (state_t n = 0; n <= N + 1; ++n) {
        const bool use_forward = n <= N && n < s.crossover_M;
        s.b[std::size_t(n)] = use_forward ? fwd.b[std::size_t(n)] : bwd.b[std::size_t(n)];
    }
    return s;
}

/// Smallest frontier whose boundary-seed influence on the b column sits
/// below 1e-20, a numeric proxy for the asymptotic seeding conditions.
template <class Real>
state_t default_frontier(const ChainTables<Real>& t, const PassageTables<Real>& passage) {
    for (std::size_t n = 1; n < t.p.size(); ++n)
        if (t.lam[n] * t.p[n] * passage.T_n0[n] < Real(1e-20)) return state_t(n);
    throw FrontierTooSmallError("stored range never meets the frontier decay rule");
}

}  // namespace bdpe
