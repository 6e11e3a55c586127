#pragma once

#include <cmath>
#include <vector>

#include "bdpe/chain.hpp"
#include "bdpe/errors.hpp"
#include "bdpe/passage.hpp"
#include "bdpe/poisson.hpp"

namespace bdpe {

enum class DivergenceClass { Explosive, Bounded, Indeterminate };

template <class Real>
struct ErrorRow {
    state_t n{};
    Real abs_factor{};        // multiplies E_abs(z) into the phi error
    Real rel_factor{};        // multiplies E_rel(z) into the phi relative error
    Real b_abs_factor{};      // same pair for the accumulated b column
    Real b_rel_factor{};
    Real predicted_abs_error{};
    Real observed_abs_error{};
    bool rel_suppressed{false};  // phi too close to 0 for a meaningful ratio
};

template <class Real>
struct ErrorReport {
    Scheme scheme{Scheme::Forward};
    Real e_abs_input{};
    std::vector<ErrorRow<Real>> rows;
    DivergenceClass divergence_class{DivergenceClass::Indeterminate};
};

namespace detail {

// Finite proxy for the limit statements: inspect lam_n p_n over the last
// quarter of the stored range.
template <class Real>
DivergenceClass classify_divergence(const ChainTables<Real>& t) {
    const std::size_t len = t.p.size();
    if (len < 8) return DivergenceClass::Indeterminate;
    const std::size_t w0 = len * 3 / 4;
    Real peak(0);
    for (std::size_t n = 0; n < len; ++n) {
        const Real v = t.lam[n] * t.p[n];
        if (v > peak) peak = v;
    }
    const Real at_start = t.lam[w0] * t.p[w0];
    const Real at_end = t.lam[len - 1] * t.p[len - 1];
    if (at_end < Real(1e-6) * peak && at_end < at_start) return DivergenceClass::Explosive;
    if (at_end > Real(0.5) * at_start && at_end > Real(1e-6) * peak) return DivergenceClass::Bounded;
    return DivergenceClass::Indeterminate;
}

template <class Real>
bool near_zero_phi(const Real& zeta, const Real& ratio_gap) {
    using std::abs;
    return abs(ratio_gap) < Real(1e-300) * (Real(1) + abs(zeta));
}

}  // namespace detail

/// Input-error propagation of the forward recurrence: the absolute phi error
/// is amplified by T_n^+ and the b error by T_0n.
template <class Real>
ErrorReport<Real> forward_error_factors(const PassageTables<Real>& passage, const ChainTables<Real>& t,
                                        Real e_abs_input, Real b0 = Real(0),
                                        bool require_relative = false) {
    ErrorReport<Real> rep;
    rep.scheme = Scheme::Forward;
    rep.e_abs_input = e_abs_input;
    rep.divergence_class = detail::classify_divergence(t);
    const Real zeta = t.zeta;
    rep.rows.resize(t.p.size());
    for (std::size_t n = 0; n < t.p.size(); ++n) {
        ErrorRow<Real>& r = rep.rows[n];
        r.n = state_t(n);
        r.abs_factor = passage.T_up[n];
        const Real gap = zeta - t.Z[n];
        if (detail::near_zero_phi(zeta, gap)) {
            if (require_relative) throw ZeroDenominatorError("mean cost equals Z_n at n=" + std::to_string(n));
            r.rel_suppressed = true;
        } else {
            r.rel_factor = zeta / gap;
        }
        if (n >= 1) {
            r.b_abs_factor = passage.T_0n[n];
            r.b_rel_factor = zeta / (b0 / passage.T_0n[n] + zeta - passage.Z_0n[n]);
        }
        r.predicted_abs_error = r.abs_factor * e_abs_input;
    }
    return rep;
}

/// Frontier-limit factors of the backward recurrence: -T_{n+1}^- for phi and
/// -T_n0 for b.  They hold once the frontier seed's influence has decayed.
template <class Real>
ErrorReport<Real> backward_error_factors(const PassageTables<Real>& passage, const ChainTables<Real>& t,
                                         Real e_abs_input, Real b0 = Real(0),
                                         bool require_relative = false) {
    ErrorReport<Real> rep;
    rep.scheme = Scheme::Backward;
    rep.e_abs_input = e_abs_input;
    rep.divergence_class = detail::classify_divergence(t);
    const Real zeta = t.zeta;
    rep.rows.resize(t.p.size());
    for (std::size_t n = 0; n < t.p.size(); ++n) {
        ErrorRow<Real>& r = rep.rows[n];
        r.n = state_t(n);
        r.abs_factor = -passage.T_down[n];
        const Real gap = passage.Z_down[n] - zeta;
        if (detail::near_zero_phi(zeta, gap)) {
            if (require_relative) throw ZeroDenominatorError("downward ratio equals the mean cost at n=" + std::to_string(n));
            r.rel_suppressed = true;
        } else {
            r.rel_factor = zeta / gap;
        }
        if (n >= 1) {
            r.b_abs_factor = -passage.T_n0[n];
            r.b_rel_factor = -zeta / (b0 / passage.T_n0[n] + passage.Z_n0[n] - zeta);
        }
        r.predicted_abs_error = r.abs_factor * e_abs_input;
    }
    return rep;
}

/// Piecewise factors of the mixed scheme: forward factors below the
/// crossovers, backward limits above them.  By construction the phi factor
/// magnitude is min(T_n^+, T_{n+1}^-) at every state.
template <class Real>
ErrorReport<Real> mixed_error_factors(const PassageTables<Real>& passage, const ChainTables<Real>& t,
                                      Real e_abs_input, Real b0 = Real(0)) {
    const ErrorReport<Real> fwd = forward_error_factors(passage, t, e_abs_input, b0);
    const ErrorReport<Real> bwd = backward_error_factors(passage, t, e_abs_input, b0);
    const state_t m = phi_crossover(t);
    const state_t M = b_crossover(passage);
    ErrorReport<Real> rep;
    rep.scheme = Scheme::Mixed;
    rep.e_abs_input = e_abs_input;
    rep.divergence_class = fwd.divergence_class;
    rep.rows.resize(t.p.size());
    for (std::size_t n = 0; n < t.p.size(); ++n) {
        const ErrorRow<Real>& phi_src = (state_t(n) < m) ? fwd.rows[n] : bwd.rows[n];
        const ErrorRow<Real>& b_src = (state_t(n) < M) ? fwd.rows[n] : bwd.rows[n];
        ErrorRow<Real>& r = rep.rows[n];
        r.n = state_t(n);
        r.abs_factor = phi_src.abs_factor;
        r.rel_factor = phi_src.rel_factor;
        r.rel_suppressed = phi_src.rel_suppressed;
        r.b_abs_factor = b_src.b_abs_factor;
        r.b_rel_factor = b_src.b_rel_factor;
        r.predicted_abs_error = r.abs_factor * e_abs_input;
    }
    return rep;
}

/// Limiting backward/forward error ratios; both shrink strictly to 0.
template <class Real>
struct SchemeRatios {
    std::vector<Real> phi_ratio;  // -Pbar_n/P_n
    std::vector<Real> b_ratio;    // -T_n0/T_0n, index >= 1
};

template <class Real>
SchemeRatios<Real> scheme_comparison(const ChainTables<Real>& t, const PassageTables<Real>& passage) {
    SchemeRatios<Real> out;
    out.phi_ratio.resize(t.p.size());
    out.b_ratio.assign(t.p.size(), Real(0));
    for (std::size_t n = 0; n < t.p.size(); ++n) {
        out.phi_ratio[n] = -t.P_bar[n] / t.P[n];
        if (n >= 1) out.b_ratio[n] = -passage.T_n0[n] / passage.T_0n[n];
    }
    return out;
}

/// Left-hand sides of the frontier-seeding decay conditions, per candidate
/// frontier N, so a chosen N can be validated a posteriori.
template <class Real>
struct BoundaryDecayRow {
    state_t N{};
    Real lam_p{};          // lam_N p_N
    Real seed_b{};         // lam_N p_N T_N0 e
    Real seed_h{};         // lam_N p_N H_N0 e
    Real seed_sqrt{};      // lam_N p_N sqrt(T_0N) e
};

template <class Real>
struct BoundaryDecayDiagnostics {
    std::vector<BoundaryDecayRow<Real>> rows;
    bool lam_p_decreasing{true};
    bool seed_b_decreasing{true};
    bool seed_h_decreasing{true};
    bool seed_sqrt_decreasing{true};
};

template <class Real>
BoundaryDecayDiagnostics<Real> boundary_decay_diagnostics(const ChainTables<Real>& t,
                                                          const PassageTables<Real>& passage,
                                                          Real e_seed) {
    using std::sqrt;
    BoundaryDecayDiagnostics<Real> out;
    out.rows.resize(t.p.size());
    for (std::size_t n = 0; n < t.p.size(); ++n) {
        BoundaryDecayRow<Real>& r = out.rows[n];
        r.N = state_t(n);
        r.lam_p = t.lam[n] * t.p[n];
        r.seed_b = r.lam_p * passage.T_n0[n] * e_seed;
        r.seed_h = r.lam_p * passage.H_n0[n] * e_seed;
        r.seed_sqrt = r.lam_p * sqrt(passage.T_0n[n]) * e_seed;
        if (n >= 2) {
            const BoundaryDecayRow<Real>& prev = out.rows[n - 1];
            if (!(r.lam_p < prev.lam_p)) out.lam_p_decreasing = false;
            if (!(r.seed_b <= prev.seed_b)) out.seed_b_decreasing = false;
            if (!(r.seed_h <= prev.seed_h)) out.seed_h_decreasing = false;
            if (!(r.seed_sqrt <= prev.seed_sqrt)) out.seed_sqrt_decreasing = false;
        }
    }
    return out;
}

/// Attach observed errors against a ground-truth solution.
template <class Real>
void fill_observed(ErrorReport<Real>& rep, const PoissonSolution<Real>& approx,
                   const PoissonSolution<Real>& exact) {
    const std::size_t len = std::min({rep.rows.size(), approx.phi.size(), exact.phi.size()});
    for (std::size_t n = 0; n < len; ++n)
        rep.rows[n].observed_abs_error = approx.phi[n] - exact.phi[n];
}

}  // namespace bdpe
