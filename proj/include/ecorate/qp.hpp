#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <string>
#include <vector>

#include "ecorate/errors.hpp"

namespace ecorate {

/// min 0.5 x'Hx + g'x  s.t.  A x <= b, with H symmetric positive definite.
struct QpProblem {
    Eigen::MatrixXd H;
    Eigen::VectorXd g;
    Eigen::MatrixXd A;
    Eigen::VectorXd b;
};

struct QpSolution {
    Eigen::VectorXd x;
    std::vector<int> active; // constraints binding at the solution
    int iterations = 0;
};

inline double qp_objective(const QpProblem& qp, const Eigen::VectorXd& x) {
    return 0.5 * x.dot(qp.H * x) + qp.g.dot(x);
}

/// Largest positive residual of Ax <= b (0 when feasible).
inline double qp_max_violation(const QpProblem& qp, const Eigen::VectorXd& x) {
    if (qp.A.rows() == 0) return 0.0;
    return std::max(0.0, (qp.A * x - qp.b).maxCoeff());
}

/// Primal active-set method for small dense strictly convex QPs.
///
/// Starts from a feasible point, walks between working-set KKT solutions,
/// adds the first blocking constraint on each step and drops the constraint
/// with the most negative multiplier when stationary. Deterministic: ties
/// break toward the lowest constraint index.
inline QpSolution solve_qp_active_set(const QpProblem& qp, const Eigen::VectorXd& x0,
                                      int max_iterations = 0) {
    const auto n = qp.H.rows();
    const auto m = qp.A.rows();
    if (qp.H.cols() != n || qp.g.size() != n || (m > 0 && qp.A.cols() != n) || qp.b.size() != m)
        throw contract_violation("qp: inconsistent problem dimensions");
    if (max_iterations <= 0) max_iterations = 100 + 10 * static_cast<int>(m + n);

    constexpr double step_tol = 1e-13;
    constexpr double multiplier_tol = 1e-11;

    Eigen::VectorXd x = x0;
    {
        const double v0 = qp_max_violation(qp, x);
        if (v0 > 1e-9)
            throw contract_violation("qp: start point infeasible by " + std::to_string(v0));
    }

    std::vector<int> working;
    for (int iter = 0; iter < max_iterations; ++iter) {
        const auto w = static_cast<Eigen::Index>(working.size());
        // KKT system for the equality-constrained subproblem
        Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(n + w, n + w);
        kkt.topLeftCorner(n, n) = qp.H;
        for (Eigen::Index i = 0; i < w; ++i) {
            kkt.block(n + i, 0, 1, n) = qp.A.row(working[i]);
            kkt.block(0, n + i, n, 1) = qp.A.row(working[i]).transpose();
        }
        Eigen::VectorXd rhs(n + w);
        rhs.head(n) = -(qp.H * x + qp.g);
        rhs.tail(w).setZero();
        const Eigen::VectorXd sol = kkt.fullPivLu().solve(rhs);
        const Eigen::VectorXd p = sol.head(n);
        const Eigen::VectorXd lambda = sol.tail(w);

        const double pscale = std::max(1.0, x.norm());
        if (p.norm() <= step_tol * pscale) {
            // stationary on the working set: check multipliers
            int drop = -1;
            double most_negative = -multiplier_tol;
            for (Eigen::Index i = 0; i < w; ++i) {
                if (lambda[i] < most_negative) {
                    most_negative = lambda[i];
                    drop = static_cast<int>(i);
                }
            }
            if (drop < 0) {
                return QpSolution{x, working, iter + 1};
            }
            working.erase(working.begin() + drop);
            continue;
        }

        // longest feasible step along p
        double alpha = 1.0;
        int blocking = -1;
        for (Eigen::Index i = 0; i < m; ++i) {
            if (std::find(working.begin(), working.end(), static_cast<int>(i)) != working.end())
                continue;
            const double api = qp.A.row(i).dot(p);
            if (api <= 1e-14) continue;
            const double slack = std::max(0.0, qp.b[i] - qp.A.row(i).dot(x));
            const double limit = slack / api;
            if (limit < alpha) {
                alpha = limit;
                blocking = static_cast<int>(i);
            }
        }
        x += alpha * p;
        if (blocking >= 0) {
            working.push_back(blocking);
            std::sort(working.begin(), working.end());
        }
    }
    throw solver_error("qp: active-set did not converge within " +
                       std::to_string(max_iterations) + " iterations (violation " +
                       std::to_string(qp_max_violation(qp, x)) + ")");
}

} // namespace ecorate
