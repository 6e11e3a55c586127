#pragma once

#include <cmath>
#include <vector>

#include "bdpe/chain.hpp"
#include "bdpe/errors.hpp"
#include "bdpe/passage.hpp"
#include "bdpe/poisson.hpp"
#include "bdpe/summation.hpp"

namespace bdpe {

template <class Real>
struct BiasResult {
    Real beta0{};
    std::vector<Real> beta;       // beta[n] = beta0 + sum_{j<n} phi_j, index 0..len
    Real remainder_bound{};       // Pbar at the last summed state times max |phi|
};

/// beta0 = -sum Pbar_j phi_j over the supplied range; the tail weights come
/// from backward accumulation so the deep-tail terms carry full precision.
template <class Real>
BiasResult<Real> bias(const std::vector<Real>& phi, const ChainTables<Real>& t) {
    using std::abs;
    using W = promoted_t<Real>;
    const std::size_t len = std::min(phi.size(), t.p.size());
    CompensatedSum<W> acc;
    Real max_abs_phi(0);
    for (std::size_t j = 0; j < len; ++j) {
        acc.add(-W(t.P_bar[j]) * W(phi[j]));
        if (abs(phi[j]) > max_abs_phi) max_abs_phi = abs(phi[j]);
    }
    BiasResult<Real> out;
    out.beta0 = Real(acc.value());
    out.beta = accumulate_b(std::vector<Real>(phi.begin(), phi.begin() + std::ptrdiff_t(len)), out.beta0);
    out.remainder_bound = (len > 0) ? t.P_bar[len - 1] * max_abs_phi : Real(0);
    return out;
}

template <class Real>
struct VarianceResult {
    Real sigma2{};
    std::vector<Real> partial;    // nondecreasing partial sums of the series
    SeriesVerdict verdict{SeriesVerdict::Inconclusive};
};

/// sigma2 = 2 sum lam_n p_n phi_n^2 over the supplied range.
template <class Real>
VarianceResult<Real> asymptotic_variance(const std::vector<Real>& phi, const ChainTables<Real>& t,
                                         double term_rel_tol = 1e-18) {
    using W = promoted_t<Real>;
    const std::size_t len = std::min(phi.size(), t.p.size());
    VarianceResult<Real> out;
    out.partial.reserve(len);
    CompensatedSum<W> acc;
    for (std::size_t n = 0; n < len; ++n) {
        acc.add(W(2) * W(t.lam[n]) * W(t.p[n]) * W(phi[n]) * W(phi[n]));
        out.partial.push_back(Real(acc.value()));
    }
    out.sigma2 = Real(acc.value());
    out.verdict = detail::classify_partial_sums(out.partial, term_rel_tol);
    return out;
}

template <class Real>
struct MetricsReport {
    Scheme scheme{Scheme::Exact};
    state_t N_used{-1};
    Real zeta{};
    Real beta0{};
    std::vector<Real> beta;
    Real sigma2{};
    Real beta0_remainder_bound{};
};

template <class Real>
MetricsReport<Real> compute_metrics(const PoissonSolution<Real>& sol, const ChainTables<Real>& t) {
    MetricsReport<Real> rep;
    rep.scheme = sol.scheme;
    rep.N_used = sol.N >= 0 ? sol.N : state_t(sol.phi.size()) - 1;
    rep.zeta = t.analytic_zeta ? *t.analytic_zeta : t.zeta;
    BiasResult<Real> b = bias(sol.phi, t);
    rep.beta0 = b.beta0;
    rep.beta = std::move(b.beta);
    rep.beta0_remainder_bound = b.remainder_bound;
    rep.sigma2 = asymptotic_variance(sol.phi, t).sigma2;
    return rep;
}

/// Predicted propagation of an input error e = z_hat - zeta into the
/// truncated metrics, per scheme.
template <class Real>
struct TruncatedMetricPredictions {
    Real forward_beta0_error{};   // beta0 computed from forward phi minus the true truncated beta0
    Real forward_sigma2_error{};  // same for sigma2, both closed decompositions
    bool sigma2_hat_diverges{true};
    bool beta0_hat_diverges{false};
    Real mixed_beta0_limit{};     // (T_p0 - T_m0) e
    Real mixed_sigma2_limit{};    // 4 beta_m e + 2 (T_p0 + T_0m - T_m0) e^2
    Real beta_m{};
    state_t m{};
};

template <class Real>
TruncatedMetricPredictions<Real> truncated_metric_errors(const ChainTables<Real>& t,
                                                         const PassageTables<Real>& passage,
                                                         const BoundaryFunctionals<Real>& boundary,
                                                         Real e_abs_input) {
    TruncatedMetricPredictions<Real> out;

    const PoissonSolution<Real> exact = solve_exact(t, passage, Real(0));
    CompensatedSum<Real> pbar_tup, p_phi, p_tup;
    for (std::size_t n = 0; n < t.p.size(); ++n) {
        pbar_tup.add(t.P_bar[n] * passage.T_up[n]);
        p_phi.add(t.P[n] * exact.phi[n]);
        p_tup.add(t.P[n] * passage.T_up[n]);
    }
    out.forward_beta0_error = -e_abs_input * pbar_tup.value();
    out.forward_sigma2_error =
        Real(4) * e_abs_input * p_phi.value() + Real(2) * e_abs_input * e_abs_input * p_tup.value();
    out.sigma2_hat_diverges = true;
    out.beta0_hat_diverges = (boundary.T_inf0_class == SeriesVerdict::Divergent);

    if (boundary.T_p0_verdict != SeriesVerdict::Convergent)
        throw RequiresFiniteTp0Error("mixed-scheme limit predictions need a finite passage time from steady state");
    const state_t m = phi_crossover(t);
    out.m = m;
    const BiasResult<Real> b = bias(exact.phi, t);
    out.beta_m = b.beta[std::size_t(m)];
    const Real T_m0 = passage.T_n0[std::size_t(m)];
    const Real T_0m = passage.T_0n[std::size_t(m)];
    out.mixed_beta0_limit = (boundary.T_p0 - T_m0) * e_abs_input;
    out.mixed_sigma2_limit = Real(4) * out.beta_m * e_abs_input +
                             Real(2) * (boundary.T_p0 + T_0m - T_m0) * e_abs_input * e_abs_input;
    return out;
}

}  // namespace bdpe
