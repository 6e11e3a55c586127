#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bdpe/errors.hpp"
#include "bdpe/summation.hpp"

namespace bdpe {

using state_t = std::int64_t;

enum class ModelKind { Mm1m, MServerBalkAbandon, LinearImmigration, Tabulated };

/// Ergodic birth-death chain on {0,1,2,...} with state-dependent cost rates.
/// birth(n) must be > 0 for n >= 0, death(n) > 0 for n >= 1 (death(0) is
/// never consulted and treated as 0).
template <class Real>
struct BirthDeathModel {
    std::function<Real(state_t)> birth;
    std::function<Real(state_t)> death;
    std::function<Real(state_t)> cost;
    ModelKind kind{ModelKind::Tabulated};
    std::optional<Real> analytic_zeta;

    Real birth_rate(state_t n) const {
        const Real v = birth(n);
        if (!(v > Real(0))) throw RateDomainError("birth rate must be positive at n=" + std::to_string(n));
        return v;
    }
    Real death_rate(state_t n) const {
        if (n == 0) return Real(0);
        const Real v = death(n);
        if (!(v > Real(0))) throw RateDomainError("death rate must be positive at n=" + std::to_string(n));
        return v;
    }
};

/// M/M/1+M queue with deadlines to the end of service:
/// arrivals lambda, service mu, abandonment theta; cost is the abandonment
/// throughput n*theta.
template <class Real = double>
BirthDeathModel<Real> make_mm1m(double lambda, double mu, double theta) {
    if (!(lambda > 0 && mu > 0 && theta > 0)) throw RateDomainError("mm1m requires lambda, mu, theta > 0");
    BirthDeathModel<Real> m;
    m.kind = ModelKind::Mm1m;
    m.birth = [lambda](state_t) { return Real(lambda); };
    m.death = [mu, theta](state_t n) { return Real(mu) + Real(n) * Real(theta); };
    m.cost = [theta](state_t n) { return Real(n) * Real(theta); };
    return m;
}

/// m-server queue with optional balking probabilities and abandonment.
/// g(m,n) = (n-m)+ when customers abandon only before entering service,
/// g(m,n) = n otherwise.  Cost is c_ab * g(m,n) * theta plus a holding rate.
template <class Real = double>
BirthDeathModel<Real> make_mserver_balk_abandon(double lambda, int servers, double mu, double theta,
                                                bool abandon_in_service, double cost_abandon,
                                                std::function<double(state_t)> holding,
                                                std::vector<double> balk = {}) {
    if (!(lambda > 0 && mu > 0 && servers >= 1 && theta >= 0 && cost_abandon >= 0))
        throw RateDomainError("mserver-balk-abandon parameter out of domain");
    for (double a : balk)
        if (!(a >= 0 && a < 1)) throw RateDomainError("balking probability must lie in [0,1)");
    BirthDeathModel<Real> m;
    m.kind = ModelKind::MServerBalkAbandon;
    auto g = [servers, abandon_in_service](state_t n) -> state_t {
        return abandon_in_service ? n : std::max<state_t>(n - servers, 0);
    };
    m.birth = [lambda, balk = std::move(balk)](state_t n) {
        const double a = (n < state_t(balk.size())) ? balk[std::size_t(n)] : (balk.empty() ? 0.0 : balk.back());
        return Real(lambda) * (Real(1) - Real(a));
    };
    m.death = [servers, mu, theta, g](state_t n) {
        return Real(std::min<state_t>(n, servers)) * Real(mu) + Real(g(n)) * Real(theta);
    };
    m.cost = [cost_abandon, theta, g, holding = std::move(holding)](state_t n) {
        return Real(cost_abandon) * Real(g(n)) * Real(theta) + Real(holding(n));
    };
    return m;
}

/// Linear birth-death chain with immigration: lambda_n = n*lambda + alpha,
/// mu_n = n*mu.  Ergodic when lambda < mu.
template <class Real = double>
BirthDeathModel<Real> make_linear_immigration(double lambda, double alpha, double mu,
                                              std::function<double(state_t)> cost) {
    if (!(lambda >= 0 && alpha > 0 && mu > 0)) throw RateDomainError("linear-immigration requires alpha, mu > 0");
    BirthDeathModel<Real> m;
    m.kind = ModelKind::LinearImmigration;
    m.birth = [lambda, alpha](state_t n) { return Real(n) * Real(lambda) + Real(alpha); };
    m.death = [mu](state_t n) { return Real(n) * Real(mu); };
    m.cost = [cost = std::move(cost)](state_t n) { return Real(cost(n)); };
    return m;
}

/// Explicit rate/cost arrays.  No tail extrapolation: touching a state past
/// the arrays raises TabulatedRangeError.
template <class Real = double>
BirthDeathModel<Real> make_tabulated(std::vector<double> lambda, std::vector<double> mu,
                                     std::vector<double> cost) {
    if (lambda.empty() || mu.size() < lambda.size() || cost.size() < lambda.size())
        throw ConfigError("tabulated model needs equally long lambda/mu/cost arrays");
    BirthDeathModel<Real> m;
    m.kind = ModelKind::Tabulated;
    auto at = [](const std::vector<double>& v, state_t n, const char* name) -> double {
        if (n < 0 || n >= state_t(v.size()))
            throw TabulatedRangeError(std::string("tabulated ") + name + " array exhausted at n=" + std::to_string(n) +
                                      " (constant extrapolation is not supported)");
        return v[std::size_t(n)];
    };
    m.birth = [lambda = std::move(lambda), at](state_t n) { return Real(at(lambda, n, "lambda")); };
    m.death = [mu = std::move(mu), at](state_t n) { return Real(at(mu, n, "mu")); };
    m.cost = [cost = std::move(cost), at](state_t n) { return Real(at(cost, n, "cost")); };
    return m;
}

struct ErgodicityReport {
    double rho_limsup_estimate{0};   // sup of lambda_n/mu_n over the inspected tail
    bool condition16_pass{false};    // limsup rho_n < 1 evidence on the horizon
    bool condition15_checked{false}; // partial-sum evidence for sum 1/(lambda_n pi_n) = inf, sum pi_n < inf
    state_t horizon{0};
};

/// Finite-horizon check of the standard sufficient ergodicity condition
/// limsup rho_n < 1, plus partial-sum evidence for the exact
/// necessary-and-sufficient condition.  A "pass" asserts only the inspected
/// prefix.
template <class Real>
ErgodicityReport check_ergodicity(const BirthDeathModel<Real>& model, state_t horizon) {
    if (horizon < 2) throw DomainError("ergodicity horizon must be >= 2");
    ErgodicityReport rep;
    rep.horizon = horizon;
    const state_t burn_in = horizon / 4;
    Real rho_tail_sup(0);
    for (state_t n = 1; n <= horizon; ++n) {
        const Real rho = model.birth_rate(n) / model.death_rate(n);
        if (n > burn_in && rho > rho_tail_sup) rho_tail_sup = rho;
    }
    rep.rho_limsup_estimate = double(rho_tail_sup);
    rep.condition16_pass = rho_tail_sup < Real(1) - Real(1e-12);

    // Partial-sum evidence for the exact condition: pi_n must shrink at the
    // tail (so sum pi_n < inf) and 1/(lambda_n pi_n) must grow without bound
    // (so its sum diverges).  Work in log space; only ratios matter.
    using std::log;
    Real log_pi(0);
    bool pi_shrinks = true, inv_grows = true;
    Real prev_log_inv(0);
    for (state_t n = 1; n <= horizon; ++n) {
        const Real step = log(model.birth_rate(n - 1)) - log(model.death_rate(n));
        log_pi += step;
        const Real log_inv = -log(model.birth_rate(n)) - log_pi;
        if (n > burn_in) {
            if (!(step < Real(0))) pi_shrinks = false;
            if (!(log_inv >= prev_log_inv)) inv_grows = false;
        }
        prev_log_inv = log_inv;
    }
    rep.condition15_checked = pi_shrinks && inv_grows;
    return rep;
}

enum class SeriesVerdict { Convergent, Divergent, Inconclusive };

/// Doubling-block classifier for a positive series sum_{n>=n0} term(n).
/// Block sums over [K, 2K) that shrink by a stable geometric factor signal
/// convergence; block sums that fail to decay signal divergence.
template <class Real>
SeriesVerdict classify_series(const std::function<Real(state_t)>& term, state_t n0 = 1,
                              state_t block0 = 256, int doublings = 14) {
    Real prev_block(-1);
    int shrink = 0, flat = 0;
    state_t lo = n0, hi = n0 + block0;
    Real ratio_last(1);
    for (int d = 0; d < doublings; ++d) {
        CompensatedSum<Real> acc;
        for (state_t n = lo; n < hi; ++n) acc.add(term(n));
        const Real block = acc.value();
        if (block == Real(0) && prev_block >= Real(0)) return SeriesVerdict::Convergent;
        if (prev_block > Real(0)) {
            ratio_last = block / prev_block;
            if (ratio_last < Real(0.9)) ++shrink; else ++flat;
        }
        prev_block = block;
        lo = hi;
        hi = 2 * hi - n0;
    }
    if (shrink >= doublings - 2 && ratio_last < Real(0.9)) return SeriesVerdict::Convergent;
    if (flat >= doublings - 2 && ratio_last > Real(0.5)) return SeriesVerdict::Divergent;
    return SeriesVerdict::Inconclusive;
}

}  // namespace bdpe
