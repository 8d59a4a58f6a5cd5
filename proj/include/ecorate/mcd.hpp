#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "ecorate/chi2.hpp"
#include "ecorate/diagnostics.hpp"
#include "ecorate/errors.hpp"
#include "ecorate/measurements.hpp"
#include "ecorate/rng.hpp"

namespace ecorate {

/// Robust location/scatter from the h-subset with minimal covariance
/// determinant. Supports dim 1 and 2 only.
struct McdEstimate {
    std::vector<double> location;            // size dim
    std::vector<double> scatter;             // row-major dim x dim, consistency-corrected
    std::vector<int> subset;                 // ascending original indices, size h
    std::vector<double> robust_sq_distances; // squared Mahalanobis distance, all n points
    int dim = 0;
    int h = 0;
};

/// Per-point outlier flags from robust distances vs a chi-square cutoff.
struct OutlierMask {
    std::vector<bool> flags; // true = outlier
    double threshold = 0.0;
};

inline int default_mcd_subset_size(int n, int dim) { return (n + dim + 1) / 2; }

/// Scatter inflation that makes the h-subset covariance consistent for
/// normal data, so squared robust distances compare against chi-square
/// quantiles: alpha / F_{dim+2}(F_dim^{-1}(alpha)) with alpha = h/n.
inline double mcd_consistency_factor(int h, int n, int dim) {
    if (h >= n) return 1.0;
    const double alpha = static_cast<double>(h) / n;
    const double q = chi2_quantile(alpha, dim);
    return alpha / chi2_cdf(q, dim + 2);
}

/// Linear-interpolation quantile of an ascending-sorted range.
inline double quantile_linear(std::span<const double> sorted_values, double q) {
    if (sorted_values.empty()) throw input_error("quantile of empty range");
    if (!(q >= 0.0 && q <= 1.0))
        throw input_error("quantile level must lie in [0,1], got " + std::to_string(q));
    const double pos = q * static_cast<double>(sorted_values.size() - 1);
    const auto lo = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(lo);
    if (frac == 0.0) return sorted_values[lo];
    return sorted_values[lo] * (1.0 - frac) + sorted_values[lo + 1] * frac;
}

namespace detail {

struct Stats2 {
    double mx = 0, my = 0;  // mean
    double sxx = 0, sxy = 0, syy = 0; // sample covariance (h-1 divisor)
    double det() const { return sxx * syy - sxy * sxy; }
};

inline Stats2 subset_stats(std::span<const std::array<double, 2>> pts,
                           std::span<const int> idx) {
    Stats2 s;
    const auto h = static_cast<double>(idx.size());
    for (int i : idx) {
        s.mx += pts[i][0];
        s.my += pts[i][1];
    }
    s.mx /= h;
    s.my /= h;
    for (int i : idx) {
        const double dx = pts[i][0] - s.mx;
        const double dy = pts[i][1] - s.my;
        s.sxx += dx * dx;
        s.sxy += dx * dy;
        s.syy += dy * dy;
    }
    s.sxx /= h - 1;
    s.sxy /= h - 1;
    s.syy /= h - 1;
    return s;
}

inline bool next_combination(std::vector<int>& comb, int n) {
    const int h = static_cast<int>(comb.size());
    int i = h - 1;
    while (i >= 0 && comb[i] == n - h + i) --i;
    if (i < 0) return false;
    ++comb[i];
    for (int j = i + 1; j < h; ++j) comb[j] = comb[j - 1] + 1;
    return true;
}

// Exhaustive search over all h-subsets; first subset in lexicographic order
// wins determinant ties. Exact but only viable for small n.
inline std::vector<int> mcd2_exhaustive(std::span<const std::array<double, 2>> pts, int h) {
    const int n = static_cast<int>(pts.size());
    std::vector<int> comb(h);
    std::iota(comb.begin(), comb.end(), 0);
    std::vector<int> best = comb;
    double best_det = subset_stats(pts, comb).det();
    while (next_combination(comb, n)) {
        const double det = subset_stats(pts, comb).det();
        if (det < best_det) {
            best_det = det;
            best = comb;
        }
    }
    return best;
}

// h indices with smallest distance, ties broken toward the smaller index.
inline std::vector<int> smallest_h(std::span<const double> dist, int h) {
    std::vector<int> order(dist.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return dist[a] < dist[b]; });
    order.resize(h);
    std::sort(order.begin(), order.end());
    return order;
}

// Concentration search for larger n: seeded random starts, each refined by
// C-steps until the subset stabilizes.
inline std::vector<int> mcd2_concentration(std::span<const std::array<double, 2>> pts, int h,
                                           int starts = 500) {
    const int n = static_cast<int>(pts.size());
    UniformRng rng(0x6d63645f32640000ULL); // fixed internal seed: search is deterministic
    std::vector<int> best;
    double best_det = std::numeric_limits<double>::infinity();
    std::vector<double> dist(n);
    for (int s = 0; s < starts; ++s) {
        // random (dim+1)-point seed, grown until its covariance is regular
        std::vector<int> idx;
        std::vector<char> used(n, 0);
        while (static_cast<int>(idx.size()) < 3) {
            const int cand = static_cast<int>(rng.next_in(0.0, static_cast<double>(n)));
            if (cand < n && !used[cand]) {
                used[cand] = 1;
                idx.push_back(cand);
            }
        }
        std::sort(idx.begin(), idx.end());
        Stats2 st = subset_stats(pts, idx);
        while (st.det() <= 0.0 && static_cast<int>(idx.size()) < n) {
            int cand;
            do {
                cand = static_cast<int>(rng.next_in(0.0, static_cast<double>(n)));
            } while (cand >= n || used[cand]);
            used[cand] = 1;
            idx.insert(std::lower_bound(idx.begin(), idx.end(), cand), cand);
            st = subset_stats(pts, idx);
        }
        if (st.det() <= 0.0) continue; // whole sample degenerate; caught by caller
        // C-steps
        std::vector<int> subset = std::move(idx);
        for (int iter = 0; iter < 200; ++iter) {
            const double inv_det = 1.0 / st.det();
            for (int i = 0; i < n; ++i) {
                const double dx = pts[i][0] - st.mx;
                const double dy = pts[i][1] - st.my;
                dist[i] = (st.syy * dx * dx - 2.0 * st.sxy * dx * dy + st.sxx * dy * dy) * inv_det;
            }
            std::vector<int> next = smallest_h(dist, h);
            if (next == subset) break;
            subset = std::move(next);
            st = subset_stats(pts, subset);
            if (st.det() <= 0.0) break;
        }
        const double det = subset_stats(pts, subset).det();
        if (det < best_det || (det == best_det && subset < best)) {
            best_det = det;
            best = subset;
        }
    }
    if (best.empty()) throw degenerate_geometry_error("mcd: no non-singular start found");
    return best;
}

} // namespace detail

/// 2-D MCD. Exact exhaustive enumeration for n <= 25, concentration search
/// beyond that. h defaults to floor((n + 3) / 2).
inline McdEstimate mcd(std::span<const std::array<double, 2>> points, int h = -1) {
    const int n = static_cast<int>(points.size());
    constexpr int dim = 2;
    if (n < dim + 2)
        throw input_error("mcd: need at least " + std::to_string(dim + 2) + " points, got " +
                          std::to_string(n));
    if (h < 0) h = default_mcd_subset_size(n, dim);
    if (h < dim + 1 || h > n)
        throw input_error("mcd: subset size " + std::to_string(h) + " outside [" +
                          std::to_string(dim + 1) + "," + std::to_string(n) + "]");

    const std::vector<int> subset = (n <= 25) ? detail::mcd2_exhaustive(points, h)
                                              : detail::mcd2_concentration(points, h);
    const detail::Stats2 st = detail::subset_stats(points, subset);
    if (!(st.det() > 0.0))
        throw degenerate_geometry_error("mcd: optimal subset has singular scatter");

    const double c = mcd_consistency_factor(h, n, dim);
    McdEstimate est;
    est.dim = dim;
    est.h = h;
    est.location = {st.mx, st.my};
    est.scatter = {c * st.sxx, c * st.sxy, c * st.sxy, c * st.syy};
    est.subset = subset;
    const double det = est.scatter[0] * est.scatter[3] - est.scatter[1] * est.scatter[2];
    est.robust_sq_distances.reserve(n);
    for (const auto& p : points) {
        const double dx = p[0] - st.mx;
        const double dy = p[1] - st.my;
        est.robust_sq_distances.push_back(
            (est.scatter[3] * dx * dx - 2.0 * est.scatter[1] * dx * dy + est.scatter[0] * dy * dy) /
            det);
    }
    return est;
}

/// 1-D MCD: the optimal h-subset is a contiguous window of the sorted values,
/// so the exact solution is a sweep over windows.
inline McdEstimate mcd(std::span<const double> values, int h = -1) {
    const int n = static_cast<int>(values.size());
    constexpr int dim = 1;
    if (n < dim + 2)
        throw input_error("mcd: need at least " + std::to_string(dim + 2) + " values, got " +
                          std::to_string(n));
    if (h < 0) h = default_mcd_subset_size(n, dim);
    if (h < dim + 1 || h > n)
        throw input_error("mcd: subset size " + std::to_string(h) + " outside [" +
                          std::to_string(dim + 1) + "," + std::to_string(n) + "]");

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return values[a] < values[b]; });

    int best_start = 0;
    double best_var = std::numeric_limits<double>::infinity();
    double best_mean = 0.0;
    for (int s = 0; s + h <= n; ++s) {
        double mean = 0.0;
        for (int j = s; j < s + h; ++j) mean += values[order[j]];
        mean /= h;
        double var = 0.0;
        for (int j = s; j < s + h; ++j) {
            const double d = values[order[j]] - mean;
            var += d * d;
        }
        var /= h - 1;
        if (var < best_var) {
            best_var = var;
            best_start = s;
            best_mean = mean;
        }
    }
    if (!(best_var > 0.0))
        throw degenerate_geometry_error("mcd: optimal 1-D window has zero variance");

    McdEstimate est;
    est.dim = dim;
    est.h = h;
    est.location = {best_mean};
    est.scatter = {mcd_consistency_factor(h, n, dim) * best_var};
    est.subset.assign(order.begin() + best_start, order.begin() + best_start + h);
    std::sort(est.subset.begin(), est.subset.end());
    est.robust_sq_distances.reserve(n);
    for (double v : values) {
        const double d = v - best_mean;
        est.robust_sq_distances.push_back(d * d / est.scatter[0]);
    }
    return est;
}

/// Flag points whose squared robust distance exceeds the chi-square cutoff
/// at `percentile` with 2 dof. Throws degenerate_geometry_error when the
/// point cloud carries no outlier information; callers decide the fallback.
inline OutlierMask detect_outliers_xy(std::span<const std::array<double, 2>> points,
                                      double percentile = 0.95) {
    const McdEstimate est = mcd(points);
    OutlierMask mask;
    mask.threshold = chi2_quantile(percentile, 2);
    mask.flags.reserve(points.size());
    for (double d2 : est.robust_sq_distances) mask.flags.push_back(d2 > mask.threshold);
    return mask;
}

inline OutlierMask detect_outliers(std::span<const NormalizedPoint> points,
                                   double percentile = 0.95) {
    if (points.size() < 4)
        throw input_error("detect_outliers: need at least 4 points, got " +
                          std::to_string(points.size()));
    std::vector<std::array<double, 2>> xy;
    xy.reserve(points.size());
    for (const NormalizedPoint& p : points) xy.push_back({p.eff, p.acc});
    return detect_outliers_xy(xy, percentile);
}

/// Least expected slope: the `quantile` order statistic of the robustly
/// filtered negative pairwise slopes. Always strictly negative; when no
/// trade-off pair exists the fallback -0.01 is returned with a diagnostic.
inline double les(std::span<const NormalizedPoint> points, double quantile = 0.75,
                  double filter_percentile = 0.95, Diagnostics* diagnostics = nullptr) {
    if (points.size() < 2)
        throw input_error("les: need at least 2 points, got " + std::to_string(points.size()));
    std::vector<double> slopes;
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            if (points[i].eff == points[j].eff) continue;
            const double s = (points[j].acc - points[i].acc) / (points[j].eff - points[i].eff);
            if (s < 0.0) slopes.push_back(s);
        }
    }
    if (slopes.empty()) {
        emit(diagnostics, diag::no_trade_off,
             "no negative pairwise slope among " + std::to_string(points.size()) +
                 " points; using fallback slope -0.01");
        return -0.01;
    }

    std::vector<double> kept = slopes;
    if (slopes.size() >= 3) {
        try {
            const McdEstimate est = mcd(std::span<const double>(slopes));
            const double cutoff = chi2_quantile(filter_percentile, 1);
            kept.clear();
            for (std::size_t i = 0; i < slopes.size(); ++i) {
                if (est.robust_sq_distances[i] <= cutoff) kept.push_back(slopes[i]);
            }
            if (kept.empty()) kept = slopes;
        } catch (const degenerate_geometry_error&) {
            emit(diagnostics, diag::degenerate_geometry,
                 "slope values carry no spread; skipping robust filter");
        }
    }
    std::sort(kept.begin(), kept.end());
    return quantile_linear(kept, quantile);
}

} // namespace ecorate
