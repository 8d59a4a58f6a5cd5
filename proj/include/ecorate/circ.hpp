#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "ecorate/errors.hpp"
#include "ecorate/measurements.hpp"

namespace ecorate {

/// Number of ordinal rating classes; class K is best, class 1 worst.
struct RatingScale {
    int classes = 5;
};

inline void validate(const RatingScale& scale) {
    if (scale.classes < 2)
        throw config_error("rating scale needs at least 2 classes, got " +
                           std::to_string(scale.classes));
}

struct CircResult {
    std::string model_id;
    double distance = 0.0; // Euclidean distance to the ideal (1,1)
    int rating = 0;
};

/// Distance from a unit-square point to the ideal corner (1,1).
inline double circ_distance(const NormalizedPoint& p) {
    return std::hypot(1.0 - p.eff, 1.0 - p.acc);
}

/// Band rating: the interval [0, sqrt(2)] is split into K equal-width rings
/// around the ideal point; the innermost ring rates K. A distance exactly on
/// a ring boundary belongs to the inner (better) ring.
inline CircResult circ_rating(const NormalizedPoint& p, RatingScale scale = {}) {
    validate(scale);
    const int k = scale.classes;
    const double d = circ_distance(p);
    int rating = k;
    if (d > 0.0) {
        const double width = std::numbers::sqrt2 / k;
        rating = k + 1 - static_cast<int>(std::ceil(d / width));
        rating = std::clamp(rating, 1, k); // guards against FP drift past sqrt(2)
    }
    return CircResult{p.model_id, d, rating};
}

inline std::vector<CircResult> circ_rate(std::span<const NormalizedPoint> points,
                                         RatingScale scale = {}) {
    std::vector<CircResult> out;
    out.reserve(points.size());
    for (const NormalizedPoint& p : points) out.push_back(circ_rating(p, scale));
    return out;
}

} // namespace ecorate
