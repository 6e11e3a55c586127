#pragma once

#include <cmath>
#include <limits>
#include <type_traits>
#include <utility>

#include "bdpe/errors.hpp"
#include "bdpe/model.hpp"

namespace bdpe {

/// Parameters of the single-server abandonment queue, with the derived
/// shape alpha = mu/theta and scale kappa = lambda/theta.
struct Mm1mParams {
    double lambda{}, mu{}, theta{};
    Mm1mParams(double l, double m, double th) : lambda(l), mu(m), theta(th) {
        if (!(l > 0 && m > 0 && th > 0)) throw DomainError("abandonment queue needs lambda, mu, theta > 0");
    }
    double alpha() const { return mu / theta; }
    double kappa() const { return lambda / theta; }
};

/// S(a) = sum_{k>=0} kappa^k / (a (a+1) ... (a+k)).  Equals
/// gamma(a, kappa) e^kappa / kappa^a, so every closed form below can be
/// written as a ratio of S values; ratios cancel the e^kappa and kappa^a
/// factors exactly and avoid all overflow until kappa is in the hundreds.
template <class Real>
Real mm1m_series(Real a, Real kappa) {
    if (!(a > Real(0)) || !(kappa > Real(0))) throw DomainError("series parameters must be positive");
    if (kappa > Real(600)) throw DomainError("series would overflow; kappa too large");
    Real term = Real(1) / a;
    Real sum = term;
    for (int k = 1; k < 100000; ++k) {
        term *= kappa / (a + Real(k));
        sum += term;
        if (term < sum * std::numeric_limits<Real>::epsilon()) return sum;
    }
    throw DomainError("series failed to converge");
}

// Carry the working type one level up so binary64 results come back
// correctly rounded; the instability experiments depend on the last ulp of
// the mean cost.
template <class Real>
using mm1m_work_t = std::conditional_t<std::is_same_v<Real, double>, long double, Real>;

/// zeta = lambda - mu + theta / S(alpha).
template <class Real = double>
Real mm1m_zeta(const Mm1mParams& q) {
    using W = mm1m_work_t<Real>;
    const W alpha = W(q.mu) / W(q.theta);
    const W kappa = W(q.lambda) / W(q.theta);
    return Real(W(q.lambda) - W(q.mu) + W(q.theta) / mm1m_series(alpha, kappa));
}

/// phi_n = 1 - S(alpha + n + 1) / S(alpha); increases to 1.
template <class Real = double>
Real mm1m_phi(const Mm1mParams& q, state_t n) {
    using W = mm1m_work_t<Real>;
    const W alpha = W(q.mu) / W(q.theta);
    const W kappa = W(q.lambda) / W(q.theta);
    return Real(W(1) - mm1m_series(alpha + W(n) + W(1), kappa) / mm1m_series(alpha, kappa));
}

/// p_0 = 1/(alpha S(alpha)); p_n = p_{n-1} kappa/(alpha+n).
template <class Real = double>
Real mm1m_steady(const Mm1mParams& q, state_t n) {
    using W = mm1m_work_t<Real>;
    const W alpha = W(q.mu) / W(q.theta);
    const W kappa = W(q.lambda) / W(q.theta);
    W p = W(1) / (alpha * mm1m_series(alpha, kappa));
    for (state_t j = 1; j <= n; ++j) p *= kappa / (alpha + W(j));
    return Real(p);
}

template <class Real = double>
BirthDeathModel<Real> make_mm1m_analytic(double lambda, double mu, double theta) {
    BirthDeathModel<Real> m = make_mm1m<Real>(lambda, mu, theta);
    m.analytic_zeta = mm1m_zeta<Real>(Mm1mParams(lambda, mu, theta));
    return m;
}

/// Regularized incomplete gamma pair (P, Q), P + Q = 1.  Power series below
/// the a+1 ridge, modified Lentz continued fraction above it; the
/// complementary member is formed by subtraction, which at the crossover
/// costs at most 1 ulp because both members are then near 1/2.
inline std::pair<double, double> reg_gamma(double a, double x) {
    if (!(a > 0) || !(x >= 0)) throw DomainError("incomplete gamma needs a > 0, x >= 0");
    if (x == 0) return {0.0, 1.0};
    const double log_prefix = a * std::log(x) - x - std::lgamma(a);
    if (log_prefix < -700) return (x < a) ? std::pair{0.0, 1.0} : std::pair{1.0, 0.0};
    const double prefix = std::exp(log_prefix);
    if (x < a + 1) {
        double term = 1.0 / a;
        double sum = term;
        for (int k = 1; k < 10000; ++k) {
            term *= x / (a + k);
            sum += term;
            if (term < sum * 1e-17) {
                const double p = prefix * sum;
                return {p, 1.0 - p};
            }
        }
        throw DomainError("incomplete gamma series failed to converge");
    }
    // Lentz's algorithm for the continued fraction of the upper function.
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 10000; ++i) {
        const double an = -double(i) * (double(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < 1e-17) {
            const double qv = prefix * h;
            return {1.0 - qv, qv};
        }
    }
    throw DomainError("incomplete gamma continued fraction failed to converge");
}

/// Cumulative steady-state probability P_n = 1 - P(alpha+n+1, kappa)/P(alpha, kappa).
inline double mm1m_cumulative(const Mm1mParams& q, state_t n) {
    const double alpha = q.alpha();
    const double kappa = q.kappa();
    return 1.0 - reg_gamma(alpha + double(n) + 1.0, kappa).first / reg_gamma(alpha, kappa).first;
}

}  // namespace bdpe
