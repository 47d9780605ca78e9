#ifndef WVLAB_REPORTS_HPP
#define WVLAB_REPORTS_HPP

#include <algorithm>
#include <optional>
#include <utility>
#include <vector>

#include "wvlab/common.hpp"

namespace wvlab {

/// Verdict of an exceptional-set scan: disjoint sorted intervals where the
/// tested inequality failed, their total measure, and (when available) the
/// theoretical measure bound the scan is compared against.
struct ExceptionalSetReport {
    std::vector<std::pair<double, double>> intervals;
    double total_measure = 0.0;
    std::optional<double> theoretical_bound; // truncated tails make this a lower estimate
    std::optional<double> eta;
    std::optional<double> delta_used;
    int excluded_points = 0; // scan points skipped because a probe left the data range
    int flagged_points = 0;
    double max_cell_width = 0.0;
};

namespace detail {

/// Turn a flagged mask over scan abscissae into merged cell intervals.
/// Point i owns the cell between the midpoints towards its neighbors,
/// clipped at the range ends.
inline void assemble_intervals(const std::vector<double>& xs, const std::vector<bool>& flagged,
                               ExceptionalSetReport& rep) {
    const std::size_t n = xs.size();
    rep.intervals.clear();
    rep.total_measure = 0.0;
    rep.flagged_points = 0;
    rep.max_cell_width = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double lo = (i == 0) ? xs[0] : 0.5 * (xs[i - 1] + xs[i]);
        const double hi = (i + 1 == n) ? xs[n - 1] : 0.5 * (xs[i] + xs[i + 1]);
        rep.max_cell_width = std::max(rep.max_cell_width, hi - lo);
        if (!flagged[i]) continue;
        ++rep.flagged_points;
        if (!rep.intervals.empty() && rep.intervals.back().second >= lo - 1e-15)
            rep.intervals.back().second = hi;
        else
            rep.intervals.emplace_back(lo, hi);
    }
    for (const auto& [lo, hi] : rep.intervals) rep.total_measure += hi - lo;
}

} // namespace detail

} // namespace wvlab

#endif
