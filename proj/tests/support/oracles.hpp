#pragma once

// Independent oracles used by the unit and acceptance suites. These
// deliberately avoid the library's own matching/IoU code paths.

#include "eerg/campaign.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <vector>

namespace oracles {

// IoU by counting unit cells on the integer grid. Only valid for boxes
// with integer coordinates.
inline double rasterized_iou(const eerg::BoundingBox& a,
                             const eerg::BoundingBox& b) {
    long long x_lo = std::min(static_cast<long long>(a.x_min),
                              static_cast<long long>(b.x_min));
    long long x_hi = std::max(static_cast<long long>(a.x_max),
                              static_cast<long long>(b.x_max));
    long long y_lo = std::min(static_cast<long long>(a.y_min),
                              static_cast<long long>(b.y_min));
    long long y_hi = std::max(static_cast<long long>(a.y_max),
                              static_cast<long long>(b.y_max));
    long long inter = 0;
    long long uni = 0;
    for (long long x = x_lo; x < x_hi; ++x) {
        for (long long y = y_lo; y < y_hi; ++y) {
            bool in_a = x >= a.x_min && x < a.x_max && y >= a.y_min &&
                        y < a.y_max;
            bool in_b = x >= b.x_min && x < b.x_max && y >= b.y_min &&
                        y < b.y_max;
            if (in_a && in_b) ++inter;
            if (in_a || in_b) ++uni;
        }
    }
    return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

// Exhaustive search over all one-to-one assignments between ground
// truth and predictions restricted to pairs with IoU >= threshold,
// maximizing matched-pair count first, then total IoU.
struct BruteForceResult {
    std::size_t matched = 0;
    double total_iou = 0.0;
    // gt index -> pred index of the best assignment found.
    std::vector<std::optional<std::size_t>> assignment;
};

inline BruteForceResult brute_force_match(
    const std::vector<std::vector<double>>& iou_matrix, double threshold) {
    std::size_t n_gt = iou_matrix.size();
    std::size_t n_pred = n_gt == 0 ? 0 : iou_matrix[0].size();

    BruteForceResult best;
    best.assignment.assign(n_gt, std::nullopt);

    std::vector<std::optional<std::size_t>> current(n_gt);
    std::vector<bool> used(n_pred, false);

    auto recurse = [&](auto&& self, std::size_t g, std::size_t matched,
                       double total) -> void {
        if (g == n_gt) {
            if (matched > best.matched ||
                (matched == best.matched && total > best.total_iou)) {
                best.matched = matched;
                best.total_iou = total;
                best.assignment = current;
            }
            return;
        }
        self(self, g + 1, matched, total);  // leave this gt unmatched
        for (std::size_t p = 0; p < n_pred; ++p) {
            if (used[p] || iou_matrix[g][p] < threshold) continue;
            used[p] = true;
            current[g] = p;
            self(self, g + 1, matched + 1, total + iou_matrix[g][p]);
            current[g] = std::nullopt;
            used[p] = false;
        }
    };
    recurse(recurse, 0, 0, 0.0);
    return best;
}

}  // namespace oracles
