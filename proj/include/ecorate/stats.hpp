#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "ecorate/chi2.hpp"
#include "ecorate/diagnostics.hpp"
#include "ecorate/errors.hpp"

namespace ecorate {

/// Average ranks (1-based) with tie groups sharing their mean rank.
struct RankVector {
    std::vector<double> ranks;
    std::vector<int> ties; // sizes of tie groups, in sorted-value order
};

inline RankVector average_ranks(std::span<const double> values) {
    const std::size_t n = values.size();
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return values[a] < values[b]; });
    RankVector rv;
    rv.ranks.resize(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        const double rank = 0.5 * static_cast<double>(i + 1 + j + 1);
        for (std::size_t k = i; k <= j; ++k) rv.ranks[order[k]] = rank;
        rv.ties.push_back(static_cast<int>(j - i + 1));
        i = j + 1;
    }
    return rv;
}

namespace detail {

inline void check_pair(std::span<const double> a, std::span<const double> b,
                       std::string_view name) {
    if (a.size() != b.size())
        throw input_error(std::string(name) + ": length mismatch " + std::to_string(a.size()) +
                          " vs " + std::to_string(b.size()));
    if (a.size() < 2)
        throw input_error(std::string(name) + ": need at least 2 observations");
}

inline bool all_equal(std::span<const double> v) {
    return std::adjacent_find(v.begin(), v.end(), std::not_equal_to<>()) == v.end();
}

} // namespace detail

/// Spearman's rho: Pearson correlation of average ranks.
inline double spearman_rho(std::span<const double> a, std::span<const double> b) {
    detail::check_pair(a, b, "spearman_rho");
    if (detail::all_equal(a) || detail::all_equal(b))
        throw input_error("spearman_rho: correlation undefined for a constant vector");
    const std::vector<double> ra = average_ranks(a).ranks;
    const std::vector<double> rb = average_ranks(b).ranks;
    const double n = static_cast<double>(a.size());
    const double mean = (n + 1.0) / 2.0;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double dx = ra[i] - mean;
        const double dy = rb[i] - mean;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    return sxy / std::sqrt(sxx * syy);
}

/// Kendall's tau-b, the tie-adjusted variant.
inline double kendall_tau_b(std::span<const double> a, std::span<const double> b) {
    detail::check_pair(a, b, "kendall_tau_b");
    const std::size_t n = a.size();
    long long concordant = 0, discordant = 0, ties_a = 0, ties_b = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double da = a[i] - a[j];
            const double db = b[i] - b[j];
            if (da == 0.0 && db == 0.0) {
                ++ties_a;
                ++ties_b;
            } else if (da == 0.0) {
                ++ties_a;
            } else if (db == 0.0) {
                ++ties_b;
            } else if ((da > 0.0) == (db > 0.0)) {
                ++concordant;
            } else {
                ++discordant;
            }
        }
    }
    const auto pairs = static_cast<long long>(n * (n - 1) / 2);
    const double denom = std::sqrt(static_cast<double>(pairs - ties_a)) *
                         std::sqrt(static_cast<double>(pairs - ties_b));
    if (denom == 0.0)
        throw input_error("kendall_tau_b: correlation undefined, all pairs tied");
    return static_cast<double>(concordant - discordant) / denom;
}

struct KwResult {
    double h_statistic = 0.0;
    int dof = 0;
    double p_value = 1.0;
};

/// Kruskal-Wallis H test with tie correction; p from the chi-square upper
/// tail with (groups - 1) dof. Fully tied data degenerates to H = 0, p = 1
/// with a diagnostic.
inline KwResult kruskal_wallis(const std::vector<std::vector<double>>& groups,
                               Diagnostics* diagnostics = nullptr) {
    if (groups.size() < 2)
        throw input_error("kruskal_wallis: need at least 2 groups, got " +
                          std::to_string(groups.size()));
    std::vector<double> pooled;
    for (std::size_t gi = 0; gi < groups.size(); ++gi) {
        if (groups[gi].empty())
            throw input_error("kruskal_wallis: group " + std::to_string(gi) + " is empty");
        pooled.insert(pooled.end(), groups[gi].begin(), groups[gi].end());
    }
    const double n = static_cast<double>(pooled.size());
    if (pooled.size() < 3) throw input_error("kruskal_wallis: need at least 3 observations");

    const RankVector rv = average_ranks(pooled);
    KwResult res;
    res.dof = static_cast<int>(groups.size()) - 1;

    double tie_sum = 0.0;
    for (int t : rv.ties) tie_sum += static_cast<double>(t) * t * t - t;
    const double correction = 1.0 - tie_sum / (n * n * n - n);
    if (correction <= 0.0) {
        emit(diagnostics, diag::all_tied,
             "all " + std::to_string(pooled.size()) + " observations identical; H = 0, p = 1");
        return res; // H = 0, p = 1
    }

    double h = 0.0;
    std::size_t offset = 0;
    for (const auto& g : groups) {
        double rank_sum = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) rank_sum += rv.ranks[offset + i];
        h += rank_sum * rank_sum / static_cast<double>(g.size());
        offset += g.size();
    }
    h = 12.0 / (n * (n + 1.0)) * h - 3.0 * (n + 1.0);
    res.h_statistic = std::max(0.0, h / correction);
    res.p_value = chi2_sf(res.h_statistic, res.dof);
    return res;
}

namespace detail {

inline double kw_h_for_assignment(std::span<const double> ranks,
                                  std::span<const int> group_of, int n_groups,
                                  double correction) {
    const double n = static_cast<double>(ranks.size());
    std::vector<double> rank_sum(n_groups, 0.0);
    std::vector<int> count(n_groups, 0);
    for (std::size_t i = 0; i < ranks.size(); ++i) {
        rank_sum[group_of[i]] += ranks[i];
        ++count[group_of[i]];
    }
    double h = 0.0;
    for (int g = 0; g < n_groups; ++g) h += rank_sum[g] * rank_sum[g] / count[g];
    h = 12.0 / (n * (n + 1.0)) * h - 3.0 * (n + 1.0);
    return std::max(0.0, h / correction);
}

} // namespace detail

/// Exact permutation p-value for the Kruskal-Wallis statistic; enumeration
/// of all group assignments, only viable for small samples (total n <= 10).
inline double kruskal_wallis_exact_p(const std::vector<std::vector<double>>& groups) {
    std::vector<double> pooled;
    std::vector<int> sizes;
    for (const auto& g : groups) {
        pooled.insert(pooled.end(), g.begin(), g.end());
        sizes.push_back(static_cast<int>(g.size()));
    }
    const int n = static_cast<int>(pooled.size());
    if (n > 10) throw input_error("kruskal_wallis_exact_p: only supported for n <= 10");
    Diagnostics scratch;
    const KwResult observed = kruskal_wallis(groups, &scratch);
    if (!scratch.empty()) return 1.0; // fully tied

    const RankVector rv = average_ranks(pooled);
    double tie_sum = 0.0;
    for (int t : rv.ties) tie_sum += static_cast<double>(t) * t * t - t;
    const double nn = static_cast<double>(n);
    const double correction = 1.0 - tie_sum / (nn * nn * nn - nn);

    std::vector<int> group_of(pooled.size(), -1);
    long long total = 0, at_least = 0;
    const auto n_groups = static_cast<int>(groups.size());
    // assign indices to groups in order; group g takes sizes[g] of the free slots
    auto recurse = [&](auto&& self, int g, int pos, int remaining) -> void {
        if (remaining == 0) {
            if (g + 1 == n_groups) {
                ++total;
                if (detail::kw_h_for_assignment(rv.ranks, group_of, n_groups, correction) >=
                    observed.h_statistic - 1e-12)
                    ++at_least;
                return;
            }
            self(self, g + 1, 0, sizes[g + 1]);
            return;
        }
        for (int i = pos; i < n; ++i) {
            if (group_of[i] != -1) continue;
            group_of[i] = g;
            self(self, g, i + 1, remaining - 1);
            group_of[i] = -1;
        }
    };
    recurse(recurse, 0, 0, sizes[0]);
    return static_cast<double>(at_least) / static_cast<double>(total);
}

} // namespace ecorate
