#pragma once

#include <cmath>
#include <limits>
#include <string>

#include "ecorate/errors.hpp"

namespace ecorate {

namespace detail {

// Regularized lower incomplete gamma P(a, x), series expansion.
// Converges quickly for x < a + 1.
inline double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double term = sum;
    for (int n = 0; n < 500; ++n) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::fabs(term) < std::fabs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Regularized upper incomplete gamma Q(a, x), Lentz continued fraction.
// Preferred for x >= a + 1.
inline double gamma_q_cf(double a, double x) {
    constexpr double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 500; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < 1e-16) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

inline double gamma_p(double a, double x) {
    if (x <= 0.0) return 0.0;
    return (x < a + 1.0) ? gamma_p_series(a, x) : 1.0 - gamma_q_cf(a, x);
}

inline double gamma_q(double a, double x) {
    if (x <= 0.0) return 1.0;
    return (x < a + 1.0) ? 1.0 - gamma_p_series(a, x) : gamma_q_cf(a, x);
}

} // namespace detail

/// P(X <= x) for X ~ chi-square with dof degrees of freedom.
inline double chi2_cdf(double x, int dof) {
    if (dof < 1) throw input_error("chi2_cdf: dof must be >= 1, got " + std::to_string(dof));
    return detail::gamma_p(0.5 * dof, 0.5 * x);
}

/// Upper tail P(X > x); computed directly so small tails keep full precision.
inline double chi2_sf(double x, int dof) {
    if (dof < 1) throw input_error("chi2_sf: dof must be >= 1, got " + std::to_string(dof));
    return detail::gamma_q(0.5 * dof, 0.5 * x);
}

/// Quantile: the x with P(chi2_dof <= x) = p, to absolute tolerance 1e-10.
inline double chi2_quantile(double p, int dof) {
    if (dof < 1) throw input_error("chi2_quantile: dof must be >= 1, got " + std::to_string(dof));
    if (!(p > 0.0 && p < 1.0))
        throw input_error("chi2_quantile: p must lie in (0,1), got " + std::to_string(p));

    double lo = 0.0;
    double hi = std::max(1.0, static_cast<double>(dof));
    while (chi2_cdf(hi, dof) < p) {
        hi *= 2.0;
        if (hi > 1e12) throw solver_error("chi2_quantile: bracket expansion failed");
    }
    // Bisection; ~60 steps reach well below the 1e-10 tolerance.
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (chi2_cdf(mid, dof) < p) {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo < 1e-12 * std::max(1.0, hi)) break;
    }
    return 0.5 * (lo + hi);
}

} // namespace ecorate
