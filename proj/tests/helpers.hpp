#pragma once

#include <cmath>
#include <cstdlib>

#include "bdpe/model.hpp"

namespace bdpe_test {

inline double rel_diff(double value, double reference) {
    return std::fabs(value - reference) / std::fabs(reference);
}

/// Geometric single-server queue (constant rates) with linear cost c_n = n.
/// Stable for lambda < mu; phi_n = (n+1)/(mu-lambda) and zeta = rho/(1-rho).
template <class Real = double>
bdpe::BirthDeathModel<Real> make_geometric_queue(double lambda, double mu) {
    bdpe::BirthDeathModel<Real> m;
    m.birth = [lambda](bdpe::state_t) { return Real(lambda); };
    m.death = [mu](bdpe::state_t) { return Real(mu); };
    m.cost = [](bdpe::state_t n) { return Real(n); };
    return m;
}

/// Chain with lambda_n = mu_n = 2^n (lambda_0 = 1): pi_n = 2^-n, so
/// lambda_n p_n stays constant along the tail instead of vanishing.
template <class Real = double>
bdpe::BirthDeathModel<Real> make_flat_flux_chain() {
    bdpe::BirthDeathModel<Real> m;
    m.birth = [](bdpe::state_t n) { return Real(std::ldexp(1.0, int(n))); };
    m.death = [](bdpe::state_t n) { return Real(std::ldexp(1.0, int(n))); };
    m.cost = [](bdpe::state_t n) { return Real(n); };
    return m;
}

/// Chain with pi_n = 1/(n+1)^2: ergodic, but the passage time to 0 from
/// steady state diverges (its series terms approach a positive constant).
template <class Real = double>
bdpe::BirthDeathModel<Real> make_quadratic_tail_chain() {
    bdpe::BirthDeathModel<Real> m;
    m.birth = [](bdpe::state_t) { return Real(1); };
    m.death = [](bdpe::state_t n) {
        const Real r = Real(n + 1) / Real(n);
        return r * r;
    };
    m.cost = [](bdpe::state_t n) { return Real(n); };
    return m;
}

}  // namespace bdpe_test
