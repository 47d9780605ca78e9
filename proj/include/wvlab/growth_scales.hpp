#ifndef WVLAB_GROWTH_SCALES_HPP
#define WVLAB_GROWTH_SCALES_HPP

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "wvlab/common.hpp"
#include "wvlab/interp.hpp"
#include "wvlab/ode.hpp"
#include "wvlab/weights.hpp"

namespace wvlab {

/// Thrown when a scale table cannot be built (overflow, hypothesis failure,
/// or an invariant violated beyond tolerance).
class ScalesBuildError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct ScalesOptions {
    int pts_per_decade = 256;
    double ode_rel_tol = 1e-12;
    double invariant_slack = 1e-9;
};

enum class Scale { A0, A1, A2, A3, g };

/// Tabulated growth scales A0..A3, g, h on a uniform log-r grid.
///
/// A1 solves dA1/dlog r = psi(A1), A1(1) = t0; A2 = psi(A1) and
/// A3 = psi'(A1)*A2 are evaluated through that identity so the algebraic
/// relations between the scales hold pointwise, not just at nodes.  A0 and g
/// accumulate their cumulative integrals cell by cell with compensated
/// summation.  h is the inverse of g, stored as its own monotone table.
class GrowthScales {
  public:
    static GrowthScales build(const WeightFunction& psi, double r_max,
                              ScalesOptions opt = {}) {
        if (!(r_max > 1.0)) throw std::invalid_argument("GrowthScales: r_max must be > 1");
        if (opt.pts_per_decade < 8)
            throw std::invalid_argument("GrowthScales: pts_per_decade too small");

        GrowthScales s(psi, opt);
        const double x_max = std::log(r_max);
        const std::size_t n =
            2 + static_cast<std::size_t>(std::ceil(opt.pts_per_decade * x_max / std::log(10.0)));
        const double dx = x_max / static_cast<double>(n - 1);

        auto rhs = [&psi](double, const std::array<double, 3>& y) {
            // y = (A1, A0 increment, g increment)
            const double p = psi.eval(y[0]);
            return std::array<double, 3>{p, y[0], std::sqrt(p)};
        };
        DormandPrince<3, decltype(rhs)> stepper(rhs, opt.ode_rel_tol, 1e-300);

        std::array<double, 3> y{psi.t0(), 0.0, 0.0};
        KahanSum a0_acc, g_acc;
        s.xs_.reserve(n);
        s.log_a1_.reserve(n);
        s.a0_.reserve(n);
        s.g_.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double x = (i == n - 1) ? x_max : dx * static_cast<double>(i);
            if (i > 0) {
                y[1] = 0.0;
                y[2] = 0.0;
                try {
                    stepper.advance(s.xs_.back(), x, y);
                } catch (const std::runtime_error&) {
                    throw ScalesBuildError(
                        "GrowthScales: integration failed (values exceed the "
                        "log-space guard before r_max)");
                }
                a0_acc.add(y[1]);
                g_acc.add(y[2]);
            }
            if (!std::isfinite(y[0]) || std::log(y[0]) > kLogSpaceGuard ||
                std::log(psi.eval(y[0])) > kLogSpaceGuard)
                throw ScalesBuildError(
                    "GrowthScales: A2 overflows the log-space representation before "
                    "r_max; rebuild with smaller r_max");
            s.xs_.push_back(x);
            s.log_a1_.push_back(std::log(y[0]));
            s.a0_.push_back(a0_acc.value());
            s.g_.push_back(g_acc.value());
        }
        s.finalize();
        return s;
    }

    const WeightFunction& psi() const { return psi_; }
    double r_max() const { return std::exp(xs_.back()); }
    double g_max() const { return g_.back(); }
    const ScalesOptions& options() const { return opt_; }
    double L_build() const { return L_; }
    double c_est() const { return c_; }
    std::size_t grid_size() const { return xs_.size(); }
    double grid_r(std::size_t i) const { return std::exp(xs_.at(i)); }

    double A1(double r) const { return std::exp(a1_tab_(log_r(r))); }
    double A2(double r) const { return psi_.eval(A1(r)); }
    double A3(double r) const {
        const double a1 = A1(r);
        return psi_.eval_derivative(a1) * psi_.eval(a1);
    }
    double A0(double r) const { return a0_tab_(log_r(r)); }
    double g(double r) const { return g_tab_(log_r(r)); }

    double eval(Scale which, double r) const {
        switch (which) {
            case Scale::A0: return A0(r);
            case Scale::A1: return A1(r);
            case Scale::A2: return A2(r);
            case Scale::A3: return A3(r);
            case Scale::g: return g(r);
        }
        throw std::invalid_argument("GrowthScales::eval: bad selector");
    }

    /// h = g^{-1}.
    double h(double t) const {
        if (!(t >= 0.0 && t <= g_.back()))
            throw std::out_of_range("GrowthScales::h: argument outside table");
        return std::exp(h_tab_(t));
    }

    /// h'(t) = h(t)/sqrt(A2(h(t))), from the defining identity.
    double h_prime(double t) const {
        const double r = h(t);
        return r / std::sqrt(A2(r));
    }

    /// rho(r) = 1 + A1(r)/(2 A2(r)); always in (1, 3/2].
    double rho(double r) const { return 1.0 + A1(r) / (2.0 * A2(r)); }

    /// A2(rho r)/A2(r); requires rho(r)*r within the table.
    double a2_growth_at_rho(double r) const {
        const double rr = rho(r) * r;
        return A2(rr) / A2(r);
    }

  private:
    GrowthScales(const WeightFunction& psi, ScalesOptions opt) : psi_(psi), opt_(opt) {}

    double log_r(double r) const {
        if (!(r > 0.0)) throw std::out_of_range("GrowthScales: r must be positive");
        const double x = std::log(r);
        if (x < xs_.front() - 1e-12 || x > xs_.back() + 1e-12)
            throw std::out_of_range("GrowthScales: r outside tabulated range");
        return std::min(std::max(x, xs_.front()), xs_.back());
    }

    void finalize() {
        const std::size_t n = xs_.size();
        std::vector<double> a1(n), a2(n), a3(n), da1(n), da0(n), dg(n), dh(n);
        for (std::size_t i = 0; i < n; ++i) {
            a1[i] = std::exp(log_a1_[i]);
            a2[i] = psi_.eval(a1[i]);
            a3[i] = psi_.eval_derivative(a1[i]) * a2[i];
            da1[i] = a2[i] / a1[i];          // d log A1 / d log r
            da0[i] = a1[i];                  // d A0 / d log r
            dg[i] = std::sqrt(a2[i]);        // d g / d log r
            dh[i] = 1.0 / std::sqrt(a2[i]);  // d log r / d g
        }

        const double t0 = psi_.t0();
        const RegularityBounds rb = psi_.regularity_bounds(t0, a1.back(), 512);
        L_ = rb.L_est;
        if (!(L_ < 2.0))
            throw ScalesBuildError("GrowthScales: regularity sup L >= 2 on range");
        c_ = psi_.eval(t0) * std::pow(t0, -L_);

        verify_invariants(a1, a2, a3);

        a1_tab_ = HermiteTable(xs_, log_a1_, da1);
        a0_tab_ = HermiteTable(xs_, a0_, da0);
        g_tab_ = HermiteTable(xs_, g_, dg);
        h_tab_ = HermiteTable(g_, xs_, dh);
        a2_nodes_ = std::move(a2);
        a3_nodes_ = std::move(a3);
    }

    void verify_invariants(const std::vector<double>& a1, const std::vector<double>& a2,
                           const std::vector<double>& a3) const {
        const double eps = opt_.invariant_slack;
        const double inv2L = 1.0 / (2.0 - L_);
        for (std::size_t i = 0; i < xs_.size(); ++i) {
            const double r = std::exp(xs_[i]);
            auto check = [&](bool ok, const char* what) {
                if (!ok)
                    throw ScalesBuildError(std::string("GrowthScales: invariant '") + what +
                                           "' violated at r=" + std::to_string(r));
            };
            check(a3[i] >= a2[i] * (1 - eps) && a2[i] >= a1[i] * (1 - eps) &&
                      a1[i] >= r * (1 - eps) && r >= 1.0 - eps,
                  "A3>=A2>=A1>=r>=1");
            const double lon = a1[i] * a3[i] / (a2[i] * a2[i]);
            check(lon >= 1.0 - eps && lon <= L_ + eps, "1<=A1*A3/A2^2<=L");
            check(a0_[i] * a2[i] <= inv2L * a1[i] * a1[i] * (1 + eps) + eps,
                  "A0*A2/A1^2<=1/(2-L)");
            check(a2[i] <= c_ * std::pow(a1[i], L_) * (1 + eps), "A2<=c*A1^L");
            if (i > 0) {
                check(a1[i] > a1[i - 1] && a2[i] > a2[i - 1] && g_[i] > g_[i - 1],
                      "A1,A2,g strictly increasing");
                const double dxl = xs_[i] - xs_[i - 1];
                const double dxr = (i + 1 < xs_.size()) ? xs_[i + 1] - xs_[i] : 0.0;
                if (i + 1 < xs_.size()) {
                    const double sl = (a1[i] - a1[i - 1]) / dxl;
                    const double sr = (a1[i + 1] - a1[i]) / dxr;
                    check(sr >= sl * (1 - 1e-9), "A1 convex in log r");
                }
            }
        }
    }

    WeightFunction psi_;
    ScalesOptions opt_;
    std::vector<double> xs_, log_a1_, a0_, g_;
    std::vector<double> a2_nodes_, a3_nodes_;
    HermiteTable a1_tab_, a0_tab_, g_tab_, h_tab_;
    double L_ = 0.0, c_ = 0.0;

  public:
    // Node-level access used by exports and the build-time checks in tests.
    double node_r(std::size_t i) const { return std::exp(xs_.at(i)); }
    double node_A0(std::size_t i) const { return a0_.at(i); }
    double node_A1(std::size_t i) const { return std::exp(log_a1_.at(i)); }
    double node_A2(std::size_t i) const { return a2_nodes_.at(i); }
    double node_A3(std::size_t i) const { return a3_nodes_.at(i); }
    double node_g(std::size_t i) const { return g_.at(i); }
};

} // namespace wvlab

#endif
