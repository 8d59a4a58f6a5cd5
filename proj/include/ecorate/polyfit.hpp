#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "ecorate/errors.hpp"
#include "ecorate/qp.hpp"

namespace ecorate {

/// Monomial-basis polynomial: coefficients[k] multiplies x^k.
struct Polynomial {
    std::vector<double> coefficients;

    int degree() const { return static_cast<int>(coefficients.size()) - 1; }
};

inline double eval_poly(const Polynomial& poly, double x) {
    double acc = 0.0;
    for (auto it = poly.coefficients.rbegin(); it != poly.coefficients.rend(); ++it)
        acc = acc * x + *it;
    return acc;
}

inline double eval_poly_derivative(const Polynomial& poly, double x) {
    double acc = 0.0;
    for (int k = poly.degree(); k >= 1; --k)
        acc = acc * x + k * poly.coefficients[static_cast<std::size_t>(k)];
    return acc;
}

struct FitConfig {
    int degree = 5;
    double domain_min = 0.0;
    double domain_max = 1.0;
    int grid_size = 201;     // derivative-constraint points, uniform over the domain
    double epsilon = 0.01;   // floor on f(domain_max)
    double ridge = 1e-9;     // Tikhonov term on the coefficients
};

inline void validate(const FitConfig& cfg) {
    if (cfg.degree < 1) throw config_error("fit: degree must be >= 1");
    if (cfg.grid_size < cfg.degree + 1)
        throw config_error("fit: grid_size must be >= degree + 1");
    if (!(cfg.epsilon > 0.0)) throw config_error("fit: epsilon must be positive");
    if (!(cfg.domain_min < cfg.domain_max)) throw config_error("fit: empty domain");
    if (cfg.ridge < 0.0) throw config_error("fit: ridge must be non-negative");
}

namespace detail {

inline Eigen::RowVectorXd monomial_row(double x, int degree) {
    Eigen::RowVectorXd row(degree + 1);
    double p = 1.0;
    for (int k = 0; k <= degree; ++k) {
        row[k] = p;
        p *= x;
    }
    return row;
}

inline Eigen::RowVectorXd derivative_row(double x, int degree) {
    Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(degree + 1);
    double p = 1.0;
    for (int k = 1; k <= degree; ++k) {
        row[k] = k * p;
        p *= x;
    }
    return row;
}

inline QpProblem build_fit_qp(std::span<const std::array<double, 2>> points, double les_slope,
                              const FitConfig& cfg, int grid_size) {
    const int nc = cfg.degree + 1;
    Eigen::MatrixXd design(points.size(), nc);
    Eigen::VectorXd y(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        design.row(static_cast<Eigen::Index>(i)) = monomial_row(points[i][0], cfg.degree);
        y[static_cast<Eigen::Index>(i)] = points[i][1];
    }
    QpProblem qp;
    qp.H = 2.0 * (design.transpose() * design +
                  cfg.ridge * Eigen::MatrixXd::Identity(nc, nc));
    qp.g = -2.0 * design.transpose() * y;
    qp.A.resize(grid_size + 1, nc);
    qp.b.resize(grid_size + 1);
    for (int j = 0; j < grid_size; ++j) {
        const double x = cfg.domain_min + (cfg.domain_max - cfg.domain_min) * j / (grid_size - 1);
        qp.A.row(j) = derivative_row(x, cfg.degree);
        qp.b[j] = les_slope;
    }
    // f(domain_max) >= epsilon
    qp.A.row(grid_size) = -monomial_row(cfg.domain_max, cfg.degree);
    qp.b[grid_size] = -cfg.epsilon;
    return qp;
}

} // namespace detail

/// Least-squares polynomial fit under the decreasing-trend constraints:
/// f'(x) <= les_slope on a uniform grid over the domain, and
/// f(domain_max) >= epsilon. Monotonicity then keeps f above epsilon
/// everywhere on the domain.
///
/// Solved as a strictly convex QP; the derivative cap is re-checked on a
/// 10x denser grid and the fit is repeated with a doubled grid if any
/// in-between point slips past the cap.
inline Polynomial fit_monotone_polynomial(std::span<const std::array<double, 2>> points,
                                          double les_slope, const FitConfig& cfg = {}) {
    validate(cfg);
    if (points.size() < 2)
        throw input_error("fit: need at least 2 points, got " + std::to_string(points.size()));
    if (!(les_slope < 0.0))
        throw input_error("fit: slope cap must be negative, got " + std::to_string(les_slope));

    constexpr double derivative_tol = 1e-8;
    constexpr double floor_tol = 1e-10;

    int grid_size = cfg.grid_size;
    for (int attempt = 0; attempt < 6; ++attempt) {
        const QpProblem qp = detail::build_fit_qp(points, les_slope, cfg, grid_size);

        // strictly feasible start: a steep line, floor kept slack
        Eigen::VectorXd x0 = Eigen::VectorXd::Zero(cfg.degree + 1);
        x0[1] = 2.0 * les_slope;
        x0[0] = cfg.epsilon - 2.0 * les_slope * cfg.domain_max + 0.5;

        const QpSolution sol = solve_qp_active_set(qp, x0);
        Polynomial poly;
        poly.coefficients.assign(sol.x.data(), sol.x.data() + sol.x.size());

        // post-check on a denser grid than the one the QP saw
        const int dense = 10 * (grid_size - 1) + 1;
        double worst = 0.0;
        for (int j = 0; j < dense; ++j) {
            const double x =
                cfg.domain_min + (cfg.domain_max - cfg.domain_min) * j / (dense - 1);
            worst = std::max(worst, eval_poly_derivative(poly, x) - les_slope);
        }
        const double floor_gap = cfg.epsilon - eval_poly(poly, cfg.domain_max);
        if (worst <= derivative_tol && floor_gap <= floor_tol) return poly;
        grid_size = 2 * (grid_size - 1) + 1;
    }
    throw solver_error("fit: derivative cap still violated after grid refinement");
}

} // namespace ecorate
