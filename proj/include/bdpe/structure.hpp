#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "bdpe/chain.hpp"
#include "bdpe/model.hpp"
#include "bdpe/passage.hpp"
#include "bdpe/poisson.hpp"

namespace bdpe {

/// One structural condition checked with exact comparisons over a finite
/// horizon; a pass asserts only the inspected prefix.
struct AssumptionItem {
    bool pass{true};
    state_t first_violation{-1};
};

struct AssumptionVerdicts {
    AssumptionItem i_a;   // net-rate increments nonnegative, strictly positive at n = 1
    AssumptionItem i_b;   // net rate concave
    AssumptionItem ii_a;  // costs nonnegative and nondecreasing
    AssumptionItem ii_b;  // costs convex
    state_t horizon{0};
    bool all() const { return i_a.pass && i_b.pass && ii_a.pass && ii_b.pass; }
};

template <class Real>
struct ConvexityVerdict {
    bool is_nondecreasing{true};
    std::optional<state_t> first_violation;
};

struct AppendixVerdicts {
    bool applicable{false};
    bool z_monotone{false};
    bool delta_T_up_positive{false};
    bool ratio_monotone{false};        // increments of H+ over increments of T+ nondecreasing
    bool ratio_below_zeta{false};
    bool ratio_approaches_zeta{false};
    bool all() const {
        return applicable && z_monotone && delta_T_up_positive && ratio_monotone &&
               ratio_below_zeta && ratio_approaches_zeta;
    }
};

template <class Real>
struct StructureReport {
    AssumptionVerdicts assumption;
    std::vector<Real> d;  // net drift mu_n - lam_n
    ConvexityVerdict<Real> convexity;
    AppendixVerdicts appendix;
};

/// Exact-comparison check of the structural conditions on rates and costs.
template <class Real>
AssumptionVerdicts check_assumption(const BirthDeathModel<Real>& model, state_t horizon,
                                    std::vector<Real>* d_out = nullptr) {
    if (horizon < 3) throw DomainError("assumption horizon must be >= 3");
    AssumptionVerdicts v;
    v.horizon = horizon;
    // The net drift is taken from the model's rate formulas, including the
    // death-rate formula at n = 0 (not the boundary value 0): the structural
    // conditions constrain the formulas, and the state-0 boundary would
    // otherwise inject a spurious jump of size mu_1 into the increments.
    std::vector<Real> d(std::size_t(horizon) + 1), c(std::size_t(horizon) + 1);
    for (state_t n = 0; n <= horizon; ++n) {
        d[std::size_t(n)] = model.death(n) - model.birth(n);
        c[std::size_t(n)] = model.cost(n);
    }
    auto fail = [](AssumptionItem& item, state_t n) {
        if (item.pass) {
            item.pass = false;
            item.first_violation = n;
        }
    };
    // Comparisons are exact up to the rounding of the supplied values
    // themselves: increments of equal formula values can jitter by an ulp.
    using std::abs;
    const Real eps = std::numeric_limits<Real>::epsilon();
    auto noise = [&](std::size_t n) {
        return Real(8) * eps * (abs(d[n]) + abs(d[n - 1]) + (n >= 2 ? abs(d[n - 2]) : Real(0)));
    };
    auto cnoise = [&](std::size_t n) {
        return Real(8) * eps * (abs(c[n]) + abs(c[n - 1]) + (n >= 2 ? abs(c[n - 2]) : Real(0)));
    };
    if (!(d[1] - d[0] > noise(1))) fail(v.i_a, 1);
    for (state_t n = 1; n <= horizon; ++n) {
        const std::size_t i = std::size_t(n);
        const Real dd = d[i] - d[i - 1];
        if (!(dd >= -noise(i))) fail(v.i_a, n);
        if (n >= 2 && !(dd <= d[i - 1] - d[i - 2] + noise(i))) fail(v.i_b, n);
    }
    for (state_t n = 0; n <= horizon; ++n) {
        const std::size_t i = std::size_t(n);
        if (!(c[i] >= Real(0))) fail(v.ii_a, n);
        if (n >= 1 && !(c[i] >= c[i - 1] - cnoise(i))) fail(v.ii_a, n);
        if (n >= 2 && !(c[i] - c[i - 1] >= c[i - 1] - c[i - 2] - cnoise(i))) fail(v.ii_b, n);
    }
    if (d_out) *d_out = std::move(d);
    return v;
}

/// Under the structural conditions the exact marginal values must be
/// nondecreasing; approximate schemes can and do break this.
template <class Real>
ConvexityVerdict<Real> verify_convexity(const PoissonSolution<Real>& sol, double tol = 1e-12) {
    using std::abs;
    ConvexityVerdict<Real> v;
    for (std::size_t n = 1; n < sol.phi.size(); ++n) {
        const Real slack = Real(tol) * std::max(Real(1), abs(sol.phi[n - 1]));
        if (sol.phi[n] < sol.phi[n - 1] - slack) {
            v.is_nondecreasing = false;
            v.first_violation = state_t(n);
            return v;
        }
    }
    return v;
}

/// Monotonicity diagnostics on the cumulative-ratio ladder: Z_n climbs, the
/// upward times strictly increase, and the incremental cost/time ratio climbs
/// toward the mean cost from below.
template <class Real>
AppendixVerdicts appendix_diagnostics(const ChainTables<Real>& t, const PassageTables<Real>& passage,
                                      bool assumption_holds, double slack_rel = 1e-12) {
    using std::abs;
    AppendixVerdicts v;
    if (!assumption_holds) return v;  // verdicts not applicable
    v.applicable = true;
    const Real zeta = t.analytic_zeta ? *t.analytic_zeta : t.zeta;
    const Real slack = Real(slack_rel);

    v.z_monotone = true;
    v.delta_T_up_positive = true;
    v.ratio_monotone = true;
    v.ratio_below_zeta = true;
    std::vector<Real> r;
    r.reserve(t.p.size());
    for (std::size_t n = 1; n < t.p.size(); ++n) {
        if (t.Z[n] < t.Z[n - 1] - slack * abs(t.Z[n - 1])) v.z_monotone = false;
        const Real dT = passage.T_up[n] - passage.T_up[n - 1];
        const Real dH = passage.H_up[n] - passage.H_up[n - 1];
        if (!(dT > Real(0))) {
            v.delta_T_up_positive = false;
            continue;
        }
        const Real rn = dH / dT;
        if (!r.empty() && rn < r.back() - slack * std::max(abs(r.back()), abs(zeta))) v.ratio_monotone = false;
        if (rn > zeta * (Real(1) + slack)) v.ratio_below_zeta = false;
        r.push_back(rn);
    }
    if (r.size() >= 2) {
        const Real gap_end = abs(r.back() - zeta);
        const Real gap_mid = abs(r[r.size() / 2] - zeta);
        // Converged-to-rounding counts as approached: once both gaps sit at
        // ulp scale the strict comparison is noise.
        const Real floor_gap = Real(4) * std::numeric_limits<Real>::epsilon() * abs(zeta);
        v.ratio_approaches_zeta = gap_end < gap_mid || gap_end <= floor_gap;
    }
    return v;
}

template <class Real>
StructureReport<Real> structure_report(const BirthDeathModel<Real>& model, const ChainTables<Real>& t,
                                       const PassageTables<Real>& passage,
                                       const PoissonSolution<Real>& exact_solution, state_t horizon) {
    StructureReport<Real> rep;
    rep.assumption = check_assumption(model, horizon, &rep.d);
    rep.convexity = verify_convexity(exact_solution);
    rep.appendix = appendix_diagnostics(t, passage, rep.assumption.all());
    return rep;
}

}  // namespace bdpe
