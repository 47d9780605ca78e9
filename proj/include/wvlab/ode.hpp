#ifndef WVLAB_ODE_HPP
#define WVLAB_ODE_HPP

#include <array>
#include <cmath>
#include <stdexcept>

#include "wvlab/common.hpp"

namespace wvlab {

/// Adaptive Dormand-Prince 5(4) step controller for a small fixed-size state.
///
/// advance() integrates y' = f(x, y) from x0 to x1 (x1 > x0), adapting the
/// internal step to the requested local relative tolerance.  The derivative
/// callback receives (x, y) and returns the state derivative.
template <std::size_t N, typename F>
class DormandPrince {
  public:
    using State = std::array<double, N>;

    DormandPrince(F f, double rel_tol = 1e-12, double abs_tol = 1e-14)
        : f_(std::move(f)), rel_tol_(rel_tol), abs_tol_(abs_tol) {}

    /// Integrate from (x0, y) to x1, updating y in place.
    void advance(double x0, double x1, State& y) {
        if (!(x1 > x0)) {
            if (x1 == x0) return;
            throw std::invalid_argument("DormandPrince: backwards step");
        }
        double x = x0;
        double h = std::min(initial_step_, x1 - x0);
        int rejects_in_row = 0;
        while (x < x1) {
            h = std::min(h, x1 - x);
            State y_new;
            const double err = step(x, h, y, y_new);
            if (err <= 1.0) {
                x += h;
                y = y_new;
                rejects_in_row = 0;
            } else if (++rejects_in_row > 60) {
                throw std::runtime_error("DormandPrince: step size underflow");
            }
            // standard PI-free controller with safety factor
            double scale = 0.9 * std::pow(std::max(err, 1e-10), -0.2);
            scale = std::min(5.0, std::max(0.2, scale));
            h *= scale;
            if (!(h > 0.0) || x + h == x)
                throw std::runtime_error("DormandPrince: vanishing step");
        }
        initial_step_ = h; // reuse as warm start for the next segment
    }

  private:
    // Normalized local error of one trial step (<= 1 means accept).
    double step(double x, double h, const State& y, State& out) {
        static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
        static constexpr double a21 = 1.0 / 5;
        static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
        static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
        static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                                a53 = 64448.0 / 6561, a54 = -212.0 / 729;
        static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                                a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                                a65 = -5103.0 / 18656;
        static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                                b5 = -2187.0 / 6784, b6 = 11.0 / 84;
        static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                                e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

        const State k1 = f_(x, y);
        State t;
        for (std::size_t i = 0; i < N; ++i) t[i] = y[i] + h * a21 * k1[i];
        const State k2 = f_(x + c2 * h, t);
        for (std::size_t i = 0; i < N; ++i) t[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        const State k3 = f_(x + c3 * h, t);
        for (std::size_t i = 0; i < N; ++i)
            t[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        const State k4 = f_(x + c4 * h, t);
        for (std::size_t i = 0; i < N; ++i)
            t[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        const State k5 = f_(x + c5 * h, t);
        for (std::size_t i = 0; i < N; ++i)
            t[i] = y[i] +
                   h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        const State k6 = f_(x + h, t);
        for (std::size_t i = 0; i < N; ++i)
            out[i] = y[i] +
                     h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        const State k7 = f_(x + h, out);

        double err = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                                   e6 * k6[i] + e7 * k7[i]);
            const double sc =
                abs_tol_ + rel_tol_ * std::max(std::fabs(y[i]), std::fabs(out[i]));
            err = std::max(err, std::fabs(ei) / sc);
        }
        return err;
    }

    F f_;
    double rel_tol_;
    double abs_tol_;
    double initial_step_ = 1e-4;
};

} // namespace wvlab

#endif
