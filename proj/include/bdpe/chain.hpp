#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <type_traits>
#include <vector>

#include "bdpe/errors.hpp"
#include "bdpe/model.hpp"
#include "bdpe/summation.hpp"

namespace bdpe {

struct TruncationPolicy {
    double tail_mass_tol{1e-30};
    double term_rel_tol{1e-18};
    state_t max_states{1'000'000};

    void validate() const {
        if (!(tail_mass_tol > 0 && tail_mass_tol < 1) || !(term_rel_tol > 0 && term_rel_tol < 1) ||
            max_states < 2)
            throw ConfigError("truncation policy out of domain");
    }
};

/// Steady-state tables over 0..n_stored().  n_star is the official truncation
/// frontier (tail-mass rule); states past it are kept so that the backward
/// tail accumulations stay accurate at the frontier itself.
template <class Real>
struct ChainTables {
    state_t n_star{0};
    std::vector<Real> lam, mu, c;
    std::vector<Real> pi, p;
    std::vector<Real> P, P_bar;  // P_n = sum_{j<=n} p_j, P_bar_n = sum_{j>n} p_j
    std::vector<Real> C, C_bar;  // same with c_j p_j terms
    std::vector<Real> Z;         // C_n / P_n
    Real zeta{};                 // compensated sum of c_n p_n plus tail remainder
    std::optional<Real> analytic_zeta;
    ModelKind kind{ModelKind::Tabulated};

    state_t n_stored() const { return state_t(p.size()) - 1; }
};

namespace detail {

// Scale every stored coefficient by an exact power of two so the raw
// products never overflow; the final normalization cancels the factor.
template <class Real>
void rescale(std::vector<Real>& pi, Real& running, int exp2) {
    using std::ldexp;
    for (Real& v : pi) v = ldexp(v, exp2);
    running = ldexp(running, exp2);
}

}  // namespace detail

/// Build pi/p/P/C tables.  Tails are accumulated backward from past the
/// frontier, never formed as 1 - P_n or zeta - C_n: at the frontier the tail
/// mass sits ~30 orders below 1 and a subtraction would destroy it.
template <class Real>
ChainTables<Real> build_tables(const BirthDeathModel<Real>& model, const TruncationPolicy& policy,
                               state_t min_stored = 0) {
    policy.validate();
    ChainTables<Real> t;
    t.kind = model.kind;
    t.analytic_zeta = model.analytic_zeta;

    const Real tail_tol = Real(policy.tail_mass_tol);
    // Keep extending past the frontier until stored terms cannot influence
    // tail sums at the frontier's own magnitude.
    const Real ext_tol = Real(std::min(policy.tail_mass_tol * policy.tail_mass_tol, 1e-60));
    const Real rem_tol = Real(1e-75);
    const Real overflow_guard = Real(1e280);

    t.lam.push_back(model.birth_rate(0));
    t.mu.push_back(Real(0));
    t.c.push_back(model.cost(0));
    t.pi.push_back(Real(1));
    Real running = Real(1);  // plain running total used only for the ratio tests
    bool frontier_found = false;

    state_t n = 0;
    try {
        while (true) {
            ++n;
            if (n > policy.max_states) {
                if (!frontier_found)
                    throw TruncationOverflowError("tail mass tolerance not met within max_states");
                break;
            }
            if (t.pi.back() > overflow_guard) detail::rescale(t.pi, running, -1000);
            const Real mu_n = model.death_rate(n);
            const Real pin = t.pi.back() * (t.lam.back() / mu_n);
            t.lam.push_back(model.birth_rate(n));
            t.mu.push_back(mu_n);
            t.c.push_back(model.cost(n));
            t.pi.push_back(pin);
            running += pin;
            const Real ratio = pin / running;
            if (!frontier_found && ratio < tail_tol) {
                frontier_found = true;
                t.n_star = n;
            }
            if (frontier_found && n >= min_stored && ratio < ext_tol) break;
        }
    } catch (const TabulatedRangeError&) {
        if (!frontier_found) throw;  // arrays genuinely too short for the tail rule
        t.n_star = std::min(t.n_star, state_t(t.pi.size()) - 1);
    }

    // Remainder of the series past the stored range, kept unnormalized in the
    // same scaling as pi.  It seeds the backward tail accumulations.
    Real rem_p(0), rem_c(0);
    try {
        Real pin = t.pi.back();
        Real lam_prev = t.lam.back();
        state_t j = state_t(t.pi.size()) - 1;
        for (int step = 0; step < 4096; ++step) {
            ++j;
            const Real mu_j = model.death_rate(j);
            pin = pin * (lam_prev / mu_j);
            lam_prev = model.birth_rate(j);
            rem_p += pin;
            rem_c += model.cost(j) * pin;
            if (pin / running < rem_tol) break;
        }
    } catch (const TabulatedRangeError&) {
        // stored arrays already cover everything the model defines
    }

    // Normalize by the full compensated mass, remainder included.
    CompensatedSum<Real> mass;
    for (const Real& v : t.pi) mass.add(v);
    mass.add(rem_p);
    const Real total = mass.value();
    if (!(total > Real(0))) throw TruncationOverflowError("potential coefficients summed to a nonpositive mass");

    const state_t last = state_t(t.pi.size()) - 1;
    t.p.resize(std::size_t(last) + 1);
    for (state_t i = 0; i <= last; ++i) t.p[std::size_t(i)] = t.pi[std::size_t(i)] / total;
    const Real p_rem = rem_p / total;
    const Real c_rem = rem_c / total;

    t.P.resize(t.p.size());
    t.C.resize(t.p.size());
    t.Z.resize(t.p.size());
    CompensatedSum<Real> accP, accC;
    for (state_t i = 0; i <= last; ++i) {
        accP.add(t.p[std::size_t(i)]);
        accC.add(t.c[std::size_t(i)] * t.p[std::size_t(i)]);
        t.P[std::size_t(i)] = accP.value();
        t.C[std::size_t(i)] = accC.value();
        t.Z[std::size_t(i)] = t.C[std::size_t(i)] / t.P[std::size_t(i)];
    }
    accC.add(c_rem);
    t.zeta = accC.value();

    t.P_bar.resize(t.p.size());
    t.C_bar.resize(t.p.size());
    CompensatedSum<Real> accPb(p_rem), accCb(c_rem);
    for (state_t i = last; i >= 0; --i) {
        t.P_bar[std::size_t(i)] = accPb.value();
        t.C_bar[std::size_t(i)] = accCb.value();
        accPb.add(t.p[std::size_t(i)]);
        accCb.add(t.c[std::size_t(i)] * t.p[std::size_t(i)]);
    }
    return t;
}

enum class ZetaMode { Analytic, Summed, Perturbed };

/// Move a value k spacing steps at its own binade, reproducing input
/// perturbations of the form z = fl(zeta) + k ulp.
inline double perturb_ulps(double z, int k) {
    for (; k > 0; --k) z = std::nextafter(z, std::numeric_limits<double>::infinity());
    for (; k < 0; ++k) z = std::nextafter(z, -std::numeric_limits<double>::infinity());
    return z;
}

template <class Real>
Real mean_cost(const ChainTables<Real>& tables, ZetaMode mode, int ulp_steps = 0) {
    switch (mode) {
        case ZetaMode::Analytic:
            if (!tables.analytic_zeta) throw MissingAnalyticFormError("model carries no closed-form mean cost");
            return *tables.analytic_zeta;
        case ZetaMode::Summed:
            return tables.zeta;
        case ZetaMode::Perturbed: {
            const Real base = tables.analytic_zeta ? *tables.analytic_zeta : tables.zeta;
            if constexpr (std::is_same_v<Real, double>) {
                return perturb_ulps(base, ulp_steps);
            } else {
                return base * (Real(1) + Real(ulp_steps) * std::numeric_limits<Real>::epsilon());
            }
        }
    }
    throw DomainError("unknown zeta mode");
}

}  // namespace bdpe
