#pragma once

#include <vector>

#include "bdpe/chain.hpp"
#include "bdpe/errors.hpp"
#include "bdpe/model.hpp"
#include "bdpe/summation.hpp"

namespace bdpe {

/// First-passage means in both directions plus their cumulative forms.
/// Index n holds the n -> n+1 upward quantities and the (n+1) -> n downward
/// quantities; cumulative entries at n cover states below n, so T_0n[0] = 0.
template <class Real>
struct PassageTables {
    std::vector<Real> T_up, H_up;      // T_n^+ = P_n/(lam_n p_n), H_n^+ = C_n/(lam_n p_n)
    std::vector<Real> T_down, H_down;  // T_{n+1}^- = Pbar_n/(lam_n p_n), H analog
    std::vector<Real> T_0n, H_0n;      // sums of T_j^+, H_j^+ for j < n
    std::vector<Real> T_n0, H_n0;      // sums of T_{j+1}^-, H_{j+1}^- for j < n
    std::vector<Real> Z_0n, Z_n0;      // cost/time ratios of the cumulatives (index >= 1)
    std::vector<Real> Z_down;          // H_{n+1}^- / T_{n+1}^-
};

template <class Real>
void upward_passage(const ChainTables<Real>& t, PassageTables<Real>& out) {
    const std::size_t len = t.p.size();
    out.T_up.resize(len);
    out.H_up.resize(len);
    out.T_0n.resize(len);
    out.H_0n.resize(len);
    out.Z_0n.assign(len, Real(0));
    CompensatedSum<Real> tAcc, hAcc;
    for (std::size_t n = 0; n < len; ++n) {
        out.T_0n[n] = tAcc.value();
        out.H_0n[n] = hAcc.value();
        if (n >= 1) out.Z_0n[n] = out.H_0n[n] / out.T_0n[n];
        const Real d = t.lam[n] * t.p[n];
        out.T_up[n] = t.P[n] / d;
        out.H_up[n] = t.C[n] / d;
        tAcc.add(out.T_up[n]);
        hAcc.add(out.H_up[n]);
    }
}

template <class Real>
void downward_passage(const ChainTables<Real>& t, PassageTables<Real>& out) {
    const std::size_t len = t.p.size();
    out.T_down.resize(len);
    out.H_down.resize(len);
    out.T_n0.resize(len);
    out.H_n0.resize(len);
    out.Z_n0.assign(len, Real(0));
    out.Z_down.resize(len);
    CompensatedSum<Real> tAcc, hAcc;
    for (std::size_t n = 0; n < len; ++n) {
        out.T_n0[n] = tAcc.value();
        out.H_n0[n] = hAcc.value();
        if (n >= 1) out.Z_n0[n] = out.H_n0[n] / out.T_n0[n];
        const Real d = t.lam[n] * t.p[n];
        out.T_down[n] = t.P_bar[n] / d;
        out.H_down[n] = t.C_bar[n] / d;
        out.Z_down[n] = out.H_down[n] / out.T_down[n];
        tAcc.add(out.T_down[n]);
        hAcc.add(out.H_down[n]);
    }
}

template <class Real>
PassageTables<Real> build_passage(const ChainTables<Real>& t) {
    PassageTables<Real> out;
    upward_passage(t, out);
    downward_passage(t, out);
    return out;
}

template <class Real>
struct BoundaryFunctionals {
    Real T_p0{};                    // mean first-passage time to 0 from steady state
    SeriesVerdict T_p0_verdict{SeriesVerdict::Inconclusive};
    SeriesVerdict sum_1_over_mu_verdict{SeriesVerdict::Inconclusive};
    SeriesVerdict T_inf0_class{SeriesVerdict::Inconclusive};
    Real T_infp{};                  // partial sum of Pbar_n T_n^+ over the stored range
    Real T_inf0{};                  // T_infp + T_p0, meaningful only when finite
};

namespace detail {

/// Partial-sum classifier: stabilized when the last quarter of the frontier
/// contributes below tol relatively; growing when it keeps adding mass.
template <class Real>
SeriesVerdict classify_partial_sums(const std::vector<Real>& partial, double tol) {
    if (partial.size() < 8) return SeriesVerdict::Inconclusive;
    const Real last = partial.back();
    const Real at_three_quarters = partial[partial.size() * 3 / 4];
    using std::abs;
    const Real growth = abs(last - at_three_quarters);
    if (growth <= Real(tol) * abs(last)) return SeriesVerdict::Convergent;
    if (growth > Real(0.01) * abs(last)) return SeriesVerdict::Divergent;
    return SeriesVerdict::Inconclusive;
}

}  // namespace detail

/// T_p0 = sum Pbar_n^2/(lam_n p_n); classification of the entrance-boundary
/// time T_inf0 via the sum-of-1/mu criterion, valid under a vanishing tail
/// birth/death ratio.
template <class Real>
BoundaryFunctionals<Real> boundary_functionals(const BirthDeathModel<Real>& model,
                                               const ChainTables<Real>& t,
                                               const PassageTables<Real>& passage,
                                               double term_rel_tol = 1e-18) {
    BoundaryFunctionals<Real> out;

    std::vector<Real> tp0_partial, tinfp_partial;
    tp0_partial.reserve(t.p.size());
    tinfp_partial.reserve(t.p.size());
    CompensatedSum<Real> tp0, tinfp;
    for (std::size_t n = 0; n < t.p.size(); ++n) {
        tp0.add(t.P_bar[n] * passage.T_down[n]);
        tinfp.add(t.P_bar[n] * passage.T_up[n]);
        tp0_partial.push_back(tp0.value());
        tinfp_partial.push_back(tinfp.value());
    }
    out.T_p0 = tp0.value();
    out.T_infp = tinfp.value();
    out.T_p0_verdict = detail::classify_partial_sums(tp0_partial, term_rel_tol);

    try {
        out.sum_1_over_mu_verdict =
            classify_series<Real>([&model](state_t n) { return Real(1) / model.death_rate(n); });
    } catch (const TabulatedRangeError&) {
        out.sum_1_over_mu_verdict = SeriesVerdict::Inconclusive;
    }

    const SeriesVerdict infp_partial_verdict = detail::classify_partial_sums(tinfp_partial, term_rel_tol);
    // T_infp and T_inf0 diverge together; a direct contradiction between the
    // stored-range evidence and the 1/mu criterion means neither is trusted.
    if ((infp_partial_verdict == SeriesVerdict::Divergent &&
         out.sum_1_over_mu_verdict == SeriesVerdict::Convergent) ||
        (infp_partial_verdict == SeriesVerdict::Convergent &&
         out.sum_1_over_mu_verdict == SeriesVerdict::Divergent))
        throw InconclusiveConvergenceError("stored-range growth of sum Pbar_n T_n^+ contradicts the 1/mu criterion");

    out.T_inf0_class = out.sum_1_over_mu_verdict;
    if (out.T_inf0_class == SeriesVerdict::Convergent) out.T_inf0 = out.T_infp + out.T_p0;
    return out;
}

}  // namespace bdpe
