#ifndef WVLAB_COUNTEREXAMPLE_HPP
#define WVLAB_COUNTEREXAMPLE_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "wvlab/common.hpp"
#include "wvlab/growth_scales.hpp"
#include "wvlab/quadrature.hpp"

namespace wvlab {

/// One zero circle of the product: m_k equally spaced zeros on |z| = h(k).
struct ZeroCircle {
    double radius;
    double log_radius;
    std::int64_t multiplicity; // floor of h/h' at k, with the downward snap
    double hh;                 // unfloored h(k)/h'(k) = sqrt(A2(h(k)))
};

struct LogAbsValue {
    double value = kNegInf;  // log|f(z)|, -inf when flagged at a zero
    double tail_bound = 0.0; // certified bound on everything neglected
    bool at_zero = false;
};

struct NearestZero {
    double distance = kPosInf;
    std::complex<double> zero;
    std::int64_t k = 0; // circle index of the nearest zero
};

struct MinModulusReport {
    std::int64_t n = 0;
    double r_n = 0.0;
    double bound = 0.0;       // termwise lower bound for min log|f| on |z| = r_n
    double sampled_min = 0.0; // minimum over the theta grid (an upper bound for the true min)
    double tail_bound = 0.0;
    bool one_tract = false;   // bound exceeds the configured tract level
};

struct DifferentiableFn {
    std::function<double(double)> eval;
    double deriv_sup = 0.0; // sup |F'| on the integration range
};

struct SumVsIntegral {
    double sum = 0.0;
    double integral = 0.0;
    double bound = 0.0;
};

/// |sum_{k=1}^{[R]} F(k) - int_{R-[R]}^{R} F| <= R sup|F'|.
inline SumVsIntegral sum_vs_integral(const DifferentiableFn& F, double R) {
    if (!(R > 0.0)) throw std::invalid_argument("sum_vs_integral: R must be > 0");
    SumVsIntegral out;
    const std::int64_t n = static_cast<std::int64_t>(std::floor(R));
    KahanSum s;
    for (std::int64_t k = 1; k <= n; ++k) s.add(F.eval(static_cast<double>(k)));
    out.sum = s.value();
    out.integral = integrate(F.eval, R - std::floor(R), R, 1e-12, 1e-12).value;
    out.bound = R * F.deriv_sup;
    if (std::fabs(out.sum - out.integral) > out.bound * (1 + 1e-9) + 1e-9)
        throw std::runtime_error(
            "sum_vs_integral: discrepancy exceeds R*sup|F'|; supplied derivative "
            "bound is too small");
    return out;
}

/// The entire function f(z) = prod_k (1 + (z/h(k))^{m_k}), m_k = [h(k)/h'(k)].
///
/// Circles are generated once from the scale tables (zeros themselves are
/// never materialized); every evaluation works through log|1+w| with w built
/// in log space, and carries a certified bound for the truncated tail.
class ProductFunction {
  public:
    /// Generate the circles for k = 1 .. ceil(g(rho r_max)) + margin.
    /// The scale table must extend to rho(r_max)*r_max.
    static ProductFunction construct(GrowthScales scales, double r_max,
                                     std::int64_t tail_margin = 64) {
        if (scales.psi().classify() != Convergence::Divergent)
            throw std::domain_error(
                "ProductFunction: psi must satisfy the divergence hypothesis");
        if (!(scales.L_build() <= 1.2 + 1e-9))
            throw std::domain_error("ProductFunction: regularity sup L exceeds 6/5 on range");
        {
            const double a1_max = scales.A1(scales.r_max());
            const double K_est =
                scales.psi().regularity_bounds(scales.psi().t0(), a1_max, 512).K_est;
            if (!(K_est >= 1.0 - 1e-12))
                throw std::domain_error("ProductFunction: regularity inf below K=1 on range");
        }
        if (!(r_max > 1.0)) throw std::invalid_argument("ProductFunction: r_max must be > 1");
        const double reach = scales.rho(r_max) * r_max;
        if (reach > scales.r_max())
            throw std::invalid_argument(
                "ProductFunction: scale table too short; need r_max >= " +
                std::to_string(reach));

        ProductFunction pf(std::move(scales));
        const std::int64_t k_cut =
            static_cast<std::int64_t>(std::ceil(pf.scales_.g(reach)));
        std::int64_t k_max = k_cut + tail_margin;
        const double g_cap = pf.scales_.g_max();
        if (static_cast<double>(k_max) > g_cap)
            k_max = static_cast<std::int64_t>(std::floor(g_cap));
        if (k_max < k_cut + 8)
            throw std::invalid_argument("ProductFunction: scale table leaves no tail margin");

        pf.circles_.reserve(static_cast<std::size_t>(k_max));
        for (std::int64_t k = 1; k <= k_max; ++k) {
            const double radius = pf.scales_.h(static_cast<double>(k));
            const double hh = std::sqrt(pf.scales_.A2(radius));
            // half-ulp guard: values within 1e-9 of an integer snap downward
            const std::int64_t mult = static_cast<std::int64_t>(std::floor(hh - 1e-9));
            if (mult < 1)
                throw std::domain_error("ProductFunction: multiplicity below 1 at k=" +
                                        std::to_string(k));
            if (!pf.circles_.empty()) {
                if (!(radius > pf.circles_.back().radius))
                    throw std::domain_error("ProductFunction: radii not increasing at k=" +
                                            std::to_string(k));
                if (mult < pf.circles_.back().multiplicity)
                    throw std::domain_error(
                        "ProductFunction: multiplicities not nondecreasing at k=" +
                        std::to_string(k));
            }
            pf.circles_.push_back({radius, std::log(radius), mult, hh});
        }
        pf.r_max_valid_ = pf.find_r_max_valid(r_max);
        return pf;
    }

    const GrowthScales& scales() const { return scales_; }
    const std::vector<ZeroCircle>& circles() const { return circles_; }
    std::int64_t k_max() const { return static_cast<std::int64_t>(circles_.size()); }
    double r_max_valid() const { return r_max_valid_; }

    /// Bound on sum_{k > cut} (r/h(k))^{m_k}, the neglected factor tail.
    /// Requires h(cut+1) >= rho(r)*r; each factor then satisfies
    /// (r/h)^{m} <= rho e^{-tau h/h'} and h/h' gains at least 1/2 per index.
    double tail_sum_bound(double r, std::int64_t cut) const {
        // any rho with h(cut+1) >= rho*r validates the chain; below the table
        // floor r=1 the value at 1 is used (weaker but valid)
        const double rho = scales_.rho(std::max(r, 1.0));
        const double tau = std::log(rho);
        double s_next;
        if (cut < k_max()) {
            const ZeroCircle& c = circles_[static_cast<std::size_t>(cut)];
            if (c.radius < rho * r * (1 - 1e-12)) return kPosInf; // bound not applicable
            s_next = c.hh;
        } else {
            const double steps = static_cast<double>(cut - k_max() + 1);
            if (circles_.back().radius < rho * r * (1 - 1e-12)) return kPosInf;
            s_next = circles_.back().hh + 0.5 * steps;
        }
        if (!(tau > 1e-14)) return kPosInf;
        // 1.01 absorbs the downward multiplicity snap (m_k >= h/h' - 1 - 1e-9)
        return 1.01 * rho * std::exp(-tau * s_next) / (1.0 - std::exp(-0.5 * tau));
    }

    /// log|f(z)| at z = r e^{i theta}, with certified truncation error.
    LogAbsValue eval_log_abs(double r, double theta) const {
        const EvalPlan p = plan(r);
        const NearestZero nz = nearest_zero(r, theta);
        if (nz.distance < 1e-12 * std::max(r, circles_.front().radius))
            return {kNegInf, p.tail_bound, true};
        return {p.eval(theta), p.tail_bound, false};
    }

    /// Per-radius evaluation plan: theta-independent parts precomputed so a
    /// theta sweep touches only the circles whose factor actually varies.
    struct EvalPlan {
        double base = 0.0;       // sum of m_k (log r - log h(k)) over saturated circles
        double tail_bound = 0.0; // certified: beyond-k_max tail + skipped small terms
        struct Active {
            double v;      // e^{-|u_k|} <= 1
            double u_pos;  // max(u_k, 0)
            double mult;
        };
        std::vector<Active> active;

        double eval(double theta) const {
            KahanSum s;
            s.add(base);
            for (const Active& a : active) {
                const double c = std::cos(a.mult * theta);
                s.add(a.u_pos + 0.5 * std::log1p(a.v * (2.0 * c + a.v)));
            }
            return s.value();
        }
    };

    EvalPlan plan(double r) const {
        if (!(r > 0.0)) throw std::domain_error("ProductFunction: r must be positive");
        if (r > r_max_valid_ * (1 + 1e-12))
            throw std::out_of_range("ProductFunction: r beyond r_max_valid");
        constexpr double kSat = 45.0; // |log w| beyond which log1p(w) folds into the error
        const double log_r = std::log(r);
        EvalPlan p;
        KahanSum base;
        double skipped = 0.0;
        for (const ZeroCircle& c : circles_) {
            const double u = static_cast<double>(c.multiplicity) * (log_r - c.log_radius);
            if (u > kSat) {
                base.add(u);
                skipped += std::exp(-u);
            } else if (u < -kSat) {
                skipped += std::exp(u);
            } else {
                p.active.push_back({std::exp(-std::fabs(u)), std::max(u, 0.0),
                                    static_cast<double>(c.multiplicity)});
            }
        }
        p.base = base.value();
        const double beyond = tail_sum_bound(r, k_max());
        // skipped magnitudes are < e^-45 each: |log(1+w)| <= 2|w| comfortably
        p.tail_bound = 2.0 * skipped + 2.0 * beyond;
        return p;
    }

    struct UpperParts {
        double s1 = 0.0;
        double s2 = 0.0;
        double s3_bound = 0.0;
        std::int64_t n1 = 0; // [g(r)]
        std::int64_t n2 = 0; // [g(rho r)]
    };

    /// log M(r,f) <= S1 + S2 + S3 with the split at [g(r)] and [g(rho r)].
    UpperParts logM_upper_parts(double r) const {
        check_radius(r);
        UpperParts out;
        out.n1 = g_floor(r);
        out.n2 = g_floor(scales_.rho(std::max(r, 1.0)) * r);
        if (out.n2 >= k_max())
            throw std::out_of_range("ProductFunction: upper-bound split beyond circle list");
        const double log_r = std::log(r);
        KahanSum s1, s2;
        for (std::int64_t k = 1; k <= out.n2; ++k) {
            const ZeroCircle& c = circles_[static_cast<std::size_t>(k - 1)];
            const double u = static_cast<double>(c.multiplicity) * (log_r - c.log_radius);
            const double a_k = u >= 0.0 ? u + std::log1p(std::exp(-u)) : std::log1p(std::exp(u));
            (k <= out.n1 ? s1 : s2).add(a_k);
        }
        out.s1 = s1.value();
        out.s2 = s2.value();
        out.s3_bound = tail_sum_bound(r, out.n2);
        return out;
    }

    double logM_upper(double r) const {
        const UpperParts p = logM_upper_parts(r);
        return p.s1 + p.s2 + p.s3_bound;
    }

    /// log M(r,f) >= N(r,1/f) = sum_{k <= [g(r)]} m_k log(r/h(k)).
    double logM_lower(double r) const {
        check_radius(r);
        const std::int64_t n = static_cast<std::int64_t>(std::floor(scales_.g(r)));
        const double log_r = std::log(r);
        KahanSum s;
        for (std::int64_t k = 1; k <= n; ++k) {
            const ZeroCircle& c = circles_[static_cast<std::size_t>(k - 1)];
            s.add(static_cast<double>(c.multiplicity) * (log_r - c.log_radius));
        }
        return s.value();
    }

    struct LowerComparison {
        double integral_value = 0.0; // A0(r) - t0 log r
        double sumf_bound = 0.0;     // g(r) * sup|d/dt (h/h') log(r/h)| via the scale bound
    };

    /// The comparison N(r,1/f) is tested against: integral value minus the
    /// sum-vs-integral discrepancy bound, built from the tabulated constants.
    LowerComparison lower_comparison(double r) const {
        check_radius(r);
        const double L = scales_.L_build();
        const double c = scales_.c_est();
        LowerComparison out;
        out.integral_value = scales_.A0(r) - scales_.psi().t0() * std::log(r);
        const double dsup =
            0.5 * L * std::pow(c, 1.0 / L) * std::pow(scales_.A2(r), 1.0 - 1.0 / L) *
                std::log(r) +
            1.0;
        out.sumf_bound = scales_.g(r) * dsup;
        return out;
    }

    /// Distance from z = r e^{i theta} to the closest zero.  Zeros of circle
    /// k sit at angles (2j+1) pi / m_k; the nearest one per circle is found
    /// arithmetically and circles are visited outward from |z| until the
    /// radial gap alone exceeds the best distance.
    NearestZero nearest_zero(double r, double theta) const {
        NearestZero best;
        const auto consider = [&](std::size_t i) {
            const ZeroCircle& c = circles_[i];
            const double radial = std::fabs(r - c.radius);
            if (radial >= best.distance) return false;
            const double m = static_cast<double>(c.multiplicity);
            const double qraw = (theta * m / kPi - 1.0) / 2.0;
            const double jbase = std::floor(qraw + 0.5);
            for (int dj = -1; dj <= 1; ++dj) {
                const double phi = (2.0 * (jbase + dj) + 1.0) * kPi / m;
                const double d2 = r * r + c.radius * c.radius -
                                  2.0 * r * c.radius * std::cos(theta - phi);
                const double d = std::sqrt(std::max(d2, 0.0));
                if (d < best.distance) {
                    best.distance = d;
                    best.zero = std::polar(c.radius, phi);
                    best.k = static_cast<std::int64_t>(i) + 1;
                }
            }
            return true;
        };
        // first circle with radius >= r
        const auto it = std::lower_bound(circles_.begin(), circles_.end(), r,
                                         [](const ZeroCircle& c, double v) {
                                             return c.radius < v;
                                         });
        std::int64_t hi = it - circles_.begin();
        std::int64_t lo = hi - 1;
        bool lo_live = lo >= 0, hi_live = hi < k_max();
        while (lo_live || hi_live) {
            if (lo_live) {
                lo_live = consider(static_cast<std::size_t>(lo)) && --lo >= 0;
            }
            if (hi_live) {
                hi_live = consider(static_cast<std::size_t>(hi)) && ++hi < k_max();
            }
        }
        return best;
    }

    /// d(r) = max over |z|=r of the nearest-zero distance.  Candidates: angles
    /// midway between consecutive zeros of the two circles bracketing r plus
    /// the zeros of the inner circle, then local golden-section refinement.
    double d_max(double r) const {
        check_radius(r);
        if (!(r > circles_.front().radius))
            throw std::out_of_range("d_max: r must exceed the first zero radius");
        const std::int64_t n = static_cast<std::int64_t>(std::floor(scales_.g(r)));
        const ZeroCircle& inner = circles_[static_cast<std::size_t>(n - 1)];
        const ZeroCircle& outer = circles_[static_cast<std::size_t>(n)];

        double best_theta = 0.0, best = -1.0;
        auto try_theta = [&](double th) {
            const double d = nearest_zero(r, th).distance;
            if (d > best) {
                best = d;
                best_theta = th;
            }
        };
        for (const ZeroCircle* c : {&inner, &outer}) {
            const double m = static_cast<double>(c->multiplicity);
            for (std::int64_t j = 0; j < c->multiplicity; ++j) {
                try_theta(2.0 * kPi * static_cast<double>(j) / m); // midway between zeros
            }
        }
        const double m_in = static_cast<double>(inner.multiplicity);
        for (std::int64_t j = 0; j < inner.multiplicity; ++j)
            try_theta((2.0 * static_cast<double>(j) + 1.0) * kPi / m_in);

        // refine around the best candidate
        const double span =
            kPi / static_cast<double>(std::max(inner.multiplicity, outer.multiplicity));
        double a = best_theta - 0.6 * span, b = best_theta + 0.6 * span;
        const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
        double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
        double f1 = nearest_zero(r, x1).distance, f2 = nearest_zero(r, x2).distance;
        while (b - a > 1e-12) {
            if (f1 < f2) {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + gr * (b - a);
                f2 = nearest_zero(r, x2).distance;
            } else {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - gr * (b - a);
                f1 = nearest_zero(r, x1).distance;
            }
        }
        try_theta(0.5 * (a + b));
        return best;
    }

    /// Minimum-modulus bound on |z| = r_n = h(n + 1/2):
    ///   min log|f| >= sum_{k<=n} log(b_k - 1) - sum_{k>n} log(1 + b_k),
    /// computed termwise with the saturation and tail handling of plan().
    MinModulusReport min_modulus_at_rn(std::int64_t n, int n_theta = 4096,
                                       double tract_log_level = std::log(1e6)) const {
        if (n < 1) throw std::invalid_argument("min_modulus_at_rn: n must be >= 1");
        const double gpos = static_cast<double>(n) + 0.5;
        if (gpos > scales_.g_max())
            throw std::out_of_range("min_modulus_at_rn: n beyond table");
        MinModulusReport rep;
        rep.n = n;
        rep.r_n = scales_.h(gpos);
        if (rep.r_n > r_max_valid_ * (1 + 1e-12))
            throw std::out_of_range("min_modulus_at_rn: r_n beyond r_max_valid");
        const double log_rn = std::log(rep.r_n);

        KahanSum low;       // sum_{k<=n} log(b_k - 1)
        KahanSum mid;       // sum_{k>n} log(1 + b_k)
        double folded = 0.0;
        for (std::int64_t k = 1; k <= k_max(); ++k) {
            const ZeroCircle& c = circles_[static_cast<std::size_t>(k - 1)];
            const double u = static_cast<double>(c.multiplicity) * (log_rn - c.log_radius);
            if (k <= n) {
                // log(b_k - 1), b_k = e^u with u > 0
                if (u > 40.0) {
                    low.add(u);
                    folded += 2.0 * std::exp(-u);
                } else {
                    low.add(std::log(std::expm1(u)));
                }
            } else {
                if (u < -45.0)
                    folded += std::exp(u);
                else
                    mid.add(std::log1p(std::exp(u)));
            }
        }
        const double tail = tail_sum_bound(rep.r_n, k_max());
        rep.tail_bound = tail + 2.0 * folded;
        rep.bound = low.value() - mid.value() - rep.tail_bound;
        rep.one_tract = rep.bound > tract_log_level;

        const EvalPlan p = plan(rep.r_n);
        double mn = kPosInf;
        for (int i = 0; i < n_theta; ++i)
            mn = std::min(mn, p.eval(2.0 * kPi * i / n_theta));
        rep.sampled_min = mn;
        return rep;
    }

  private:
    explicit ProductFunction(GrowthScales scales) : scales_(std::move(scales)) {}

    void check_radius(double r) const {
        if (!(r > 0.0 && r <= r_max_valid_ * (1 + 1e-12)))
            throw std::out_of_range("ProductFunction: radius outside certified range");
    }

    double find_r_max_valid(double r_max) const {
        double r = r_max;
        for (int i = 0; i < 200; ++i) {
            const std::int64_t cut =
                static_cast<std::int64_t>(std::floor(scales_.g(scales_.rho(r) * r))) + 1;
            if (cut <= k_max() && tail_sum_bound(r, k_max()) < 1e-9) return r;
            r *= 0.99;
        }
        throw std::domain_error("ProductFunction: no radius with certified tail control");
    }

    GrowthScales scales_;
    std::vector<ZeroCircle> circles_;
    double r_max_valid_ = 0.0;
};

} // namespace wvlab

#endif
