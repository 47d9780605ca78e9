#ifndef WVLAB_INTERP_HPP
#define WVLAB_INTERP_HPP

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "wvlab/common.hpp"

namespace wvlab {

/// Shape-preserving cubic Hermite table over strictly increasing abscissae.
///
/// Node slopes are supplied by the caller (here always analytic identities,
/// never finite differences) and run through the Fritsch-Carlson limiter so
/// the interpolant stays monotone wherever the data is.
class HermiteTable {
  public:
    HermiteTable() = default;

    HermiteTable(std::vector<double> xs, std::vector<double> ys, std::vector<double> dydx)
        : xs_(std::move(xs)), ys_(std::move(ys)), d_(std::move(dydx)) {
        if (xs_.size() < 2 || xs_.size() != ys_.size() || xs_.size() != d_.size())
            throw std::invalid_argument("HermiteTable: inconsistent node arrays");
        for (std::size_t i = 1; i < xs_.size(); ++i)
            if (!(xs_[i] > xs_[i - 1]))
                throw std::invalid_argument("HermiteTable: abscissae not increasing");
        limit_slopes();
    }

    double x_min() const { return xs_.front(); }
    double x_max() const { return xs_.back(); }
    std::size_t size() const { return xs_.size(); }
    const std::vector<double>& xs() const { return xs_; }
    const std::vector<double>& ys() const { return ys_; }

    double operator()(double x) const {
        const std::size_t i = locate(x);
        const double hx = xs_[i + 1] - xs_[i];
        const double s = (x - xs_[i]) / hx;
        const double s2 = s * s, s3 = s2 * s;
        const double h00 = 2 * s3 - 3 * s2 + 1;
        const double h10 = s3 - 2 * s2 + s;
        const double h01 = -2 * s3 + 3 * s2;
        const double h11 = s3 - s2;
        return h00 * ys_[i] + hx * h10 * d_[i] + h01 * ys_[i + 1] + hx * h11 * d_[i + 1];
    }

    double derivative(double x) const {
        const std::size_t i = locate(x);
        const double hx = xs_[i + 1] - xs_[i];
        const double s = (x - xs_[i]) / hx;
        const double s2 = s * s;
        return (6 * s2 - 6 * s) / hx * (ys_[i] - ys_[i + 1]) + (3 * s2 - 4 * s + 1) * d_[i] +
               (3 * s2 - 2 * s) * d_[i + 1];
    }

  private:
    std::size_t locate(double x) const {
        if (!(x >= xs_.front() && x <= xs_.back()))
            throw std::out_of_range("HermiteTable: query outside tabulated range");
        auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
        std::size_t i = static_cast<std::size_t>(it - xs_.begin());
        if (i > 0) --i;
        if (i >= xs_.size() - 1) i = xs_.size() - 2;
        return i;
    }

    void limit_slopes() {
        // Fritsch-Carlson: clamp node slopes into the cone that keeps the
        // Hermite cubic monotone on each cell.  Analytic slopes of smooth
        // monotone data already satisfy this except at roundoff level.
        const std::size_t n = xs_.size();
        std::vector<double> sec(n - 1);
        for (std::size_t i = 0; i + 1 < n; ++i)
            sec[i] = (ys_[i + 1] - ys_[i]) / (xs_[i + 1] - xs_[i]);
        for (std::size_t i = 0; i + 1 < n; ++i) {
            if (sec[i] == 0.0) {
                d_[i] = 0.0;
                d_[i + 1] = 0.0;
                continue;
            }
            const double a = d_[i] / sec[i];
            const double b = d_[i + 1] / sec[i];
            if (a < 0.0) d_[i] = 0.0;
            if (b < 0.0) d_[i + 1] = 0.0;
            const double r = std::hypot(a, b);
            if (r > 3.0) {
                d_[i] *= 3.0 / r;
                d_[i + 1] *= 3.0 / r;
            }
        }
    }

    std::vector<double> xs_, ys_, d_;
};

} // namespace wvlab

#endif
