#ifndef WVLAB_BOREL_HPP
#define WVLAB_BOREL_HPP

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "wvlab/common.hpp"
#include "wvlab/quadrature.hpp"
#include "wvlab/reports.hpp"
#include "wvlab/weights.hpp"

namespace wvlab {

/// Nondecreasing function given by samples, with step (right-continuous) or
/// linear interpolation between abscissae.
class MonotoneSample {
  public:
    enum class Interp { Step, Linear };

    MonotoneSample(std::vector<double> xs, std::vector<double> Ts,
                   Interp mode = Interp::Linear)
        : xs_(std::move(xs)), Ts_(std::move(Ts)), mode_(mode) {
        if (xs_.size() < 2 || xs_.size() != Ts_.size())
            throw std::invalid_argument("MonotoneSample: need matching arrays, size >= 2");
        for (std::size_t i = 1; i < xs_.size(); ++i) {
            if (!(xs_[i] > xs_[i - 1]))
                throw std::invalid_argument("MonotoneSample: abscissae not increasing");
            if (Ts_[i] < Ts_[i - 1])
                throw std::invalid_argument("MonotoneSample: values not nondecreasing");
        }
    }

    double operator()(double x) const {
        if (!(x >= xs_.front() && x <= xs_.back()))
            throw std::out_of_range("MonotoneSample: query outside range");
        auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
        std::size_t i = static_cast<std::size_t>(it - xs_.begin());
        if (i > 0) --i;
        if (i >= xs_.size() - 1) i = xs_.size() - 2;
        if (mode_ == Interp::Step) return x >= xs_[i + 1] ? Ts_[i + 1] : Ts_[i];
        const double w = (x - xs_[i]) / (xs_[i + 1] - xs_[i]);
        return Ts_[i] + w * (Ts_[i + 1] - Ts_[i]);
    }

    const std::vector<double>& xs() const { return xs_; }
    const std::vector<double>& values() const { return Ts_; }
    double x_min() const { return xs_.front(); }
    double x_max() const { return xs_.back(); }

    /// Discrete convexity: difference quotients nondecreasing.
    bool is_convex(double rel_slack = 1e-10) const {
        double prev = -kPosInf;
        for (std::size_t i = 0; i + 1 < xs_.size(); ++i) {
            const double s = (Ts_[i + 1] - Ts_[i]) / (xs_[i + 1] - xs_[i]);
            if (s < prev - rel_slack * std::max(1.0, std::fabs(prev))) return false;
            prev = s;
        }
        return true;
    }

  private:
    std::vector<double> xs_, Ts_;
    Interp mode_;
};

/// Closed-form descriptor sigma(t) = c * t^p * (log t)^q * psi(t)^s * V(t)^v.
///
/// Keeping sigma handles in this small algebra (rather than arbitrary code)
/// makes scans reproducible and serializable; every derivative the scans need
/// is available symbolically.
struct SigmaFn {
    double c = 1.0;
    double p = 0.0;
    double q = 0.0;
    double s = 0.0; // power of psi(t)
    double v = 0.0; // power of V(t) = int_t^oo du/psi
    std::optional<WeightFunction> psi;

    double eval(double t) const {
        check(t);
        double out = c * std::pow(t, p);
        if (q != 0.0) out *= std::pow(std::log(t), q);
        if (s != 0.0) out *= std::pow(psi->eval(t), s);
        if (v != 0.0) out *= std::pow(psi->v_tail(t), v);
        return out;
    }

    /// t sigma'(t) / sigma(t).
    double log_derivative_t(double t) const {
        check(t);
        double out = p;
        if (q != 0.0) out += q / std::log(t);
        if (s != 0.0) out += s * psi->log_derivative_t(t);
        if (v != 0.0) out -= v * t / (psi->eval(t) * psi->v_tail(t));
        return out;
    }

    std::string describe() const {
        std::string d = "c=" + std::to_string(c) + " t^" + std::to_string(p);
        if (q != 0.0) d += " log^" + std::to_string(q);
        if (s != 0.0) d += " psi^" + std::to_string(s);
        if (v != 0.0) d += " V^" + std::to_string(v);
        return d;
    }

  private:
    void check(double t) const {
        if (!(t > 1.0) && (q != 0.0 || v != 0.0))
            throw std::domain_error("SigmaFn: t must exceed 1");
        if ((s != 0.0 || v != 0.0) && !psi)
            throw std::logic_error("SigmaFn: psi-dependent factor without psi");
    }
};

inline SigmaFn make_sigma_power_log(double c, double p, double q) { return {c, p, q, 0, 0, {}}; }

/// sigma_1 = sigma_2 = V(t)^{K/2} sqrt(psi(t)); K defaults to the sampled
/// regularity inf clamped below 1.
inline std::pair<SigmaFn, SigmaFn> sigma_pair_from_psi(const WeightFunction& psi,
                                                       double K = -1.0) {
    if (psi.classify() != Convergence::Convergent)
        throw std::domain_error("sigma_pair_from_psi: V undefined for divergent psi");
    if (K <= 0.0) {
        const double hi = std::min(psi.t0() * 1e8, std::exp(kLogSpaceGuard));
        K = std::min(psi.regularity_bounds(psi.t0(), hi, 256).K_est, 0.99);
    }
    if (!(K > 0.0 && K < 1.0))
        throw std::invalid_argument("sigma_pair_from_psi: K must lie in (0,1)");
    SigmaFn sig{1.0, 0.0, 0.0, 0.5, K / 2.0, psi};
    return {sig, sig};
}

/// Growth-regularity scan: marks sampled x where
///   T(x + 1/sigma1(T(x))) < T(x) + sigma2(T(x))   or
///   T(x - 1/sigma1(T(x))) > T(x) - sigma2(T(x))
/// fails, and reports the measured set against the proof's measure bound
///   [1/sigma1(t0) + (1/eta) int dv/(sigma1 sigma2) + 1]  (E1 part)
/// plus the same with delta in place of eta (E2 part).  The tail integral is
/// truncated at the data's range, making the bound a lower estimate.
inline ExceptionalSetReport scan_lemma21(const MonotoneSample& T, const SigmaFn& sigma1,
                                         const SigmaFn& sigma2, double delta) {
    if (!(delta > 0.0 && delta <= 1.0))
        throw std::invalid_argument("scan_lemma21: delta must be in (0,1]");
    const double t0 = T.values().front();
    const double t_end = T.values().back();
    if (!(t0 > 0.0)) throw std::invalid_argument("scan_lemma21: T must be positive");

    // sigma_2 regularity 0 <= t sigma2'/sigma2 <= 1-delta, sampled geometrically
    {
        const int n = 257;
        const double la = std::log(t0), lb = std::log(std::max(t_end, t0 * (1 + 1e-12)));
        for (int i = 0; i < n; ++i) {
            const double t = std::exp(la + (lb - la) * i / (n - 1));
            const double w = sigma2.log_derivative_t(t);
            if (!(w >= -1e-12 && w <= 1.0 - delta + 1e-12))
                throw std::domain_error(
                    "scan_lemma21: sigma2 regularity fails at t=" + std::to_string(t) +
                    " (t sigma2'/sigma2 = " + std::to_string(w) + ")");
        }
    }

    double integral = 0.0;
    if (t_end > t0)
        integral = integrate([&](double t) { return 1.0 / (sigma1.eval(t) * sigma2.eval(t)); },
                             t0, t_end, 1e-12, 1e-10)
                       .value;

    const double G0 = t0 / sigma2.eval(t0);
    const double eta = delta * G0 * std::log1p(1.0 / G0);
    ExceptionalSetReport rep;
    rep.eta = eta;
    rep.delta_used = delta;
    rep.theoretical_bound = (1.0 / sigma1.eval(t0) + integral / eta + 1.0) +
                            (1.0 / sigma1.eval(t0) + integral / delta + 1.0);

    const std::vector<double>& xs = T.xs();
    std::vector<bool> flagged(xs.size(), false);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double tx = T(xs[i]);
        const double step = 1.0 / sigma1.eval(tx);
        if (xs[i] + step > T.x_max() || xs[i] - step < T.x_min()) {
            ++rep.excluded_points;
            continue;
        }
        const bool upper_ok = T(xs[i] + step) < tx + sigma2.eval(tx);
        const bool lower_ok = T(xs[i] - step) > tx - sigma2.eval(tx);
        flagged[i] = !(upper_ok && lower_ok);
    }
    detail::assemble_intervals(xs, flagged, rep);
    return rep;
}

/// Convexity-form scan: flags x where
///   sup_{|h| <= 1/sqrt(psi(Phi'(x)))} [Phi(x+h) - Phi(x) - Phi'(x) h] > epsilon
/// with Phi' the right difference quotient.  The sup of a convex difference
/// over a symmetric h-interval is attained at an endpoint, so only the two
/// endpoints are probed.
inline ExceptionalSetReport scan_lemma22(const MonotoneSample& Phi, const WeightFunction& psi,
                                         double epsilon) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("scan_lemma22: epsilon must be > 0");
    if (!Phi.is_convex()) throw std::domain_error("scan_lemma22: Phi convexity violated");
    if (psi.classify() != Convergence::Convergent)
        throw std::domain_error("scan_lemma22: psi must satisfy the convergence hypothesis");

    const std::vector<double>& xs = Phi.xs();
    const std::vector<double>& ys = Phi.values();
    std::vector<bool> flagged(xs.size(), false);
    ExceptionalSetReport rep;
    double dphi_min = kPosInf, dphi_max = 0.0;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
        const double dphi = (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]);
        if (!(dphi >= psi.t0())) {
            ++rep.excluded_points;
            continue;
        }
        const double H = 1.0 / std::sqrt(psi.eval(dphi));
        if (xs[i] + H > Phi.x_max() || xs[i] - H < Phi.x_min()) {
            ++rep.excluded_points;
            continue;
        }
        dphi_min = std::min(dphi_min, dphi);
        dphi_max = std::max(dphi_max, dphi);
        const double up = Phi(xs[i] + H) - Phi(xs[i]) - dphi * H;
        const double dn = Phi(xs[i] - H) - Phi(xs[i]) + dphi * H;
        flagged[i] = std::max(up, dn) > epsilon;
    }
    ++rep.excluded_points; // the last point has no right difference quotient
    detail::assemble_intervals(xs, flagged, rep);

    // Measure bound from the proof machinery: apply the lemma-2.1 bound to
    // T = Phi' with sigma_1 = sigma_2 = V^{K/2} sqrt(psi).
    if (dphi_min < dphi_max) {
        const auto [s1, s2] = sigma_pair_from_psi(psi);
        const double K = 2.0 * s2.v;
        double sup_reg = 0.0;
        for (int i = 0; i < 257; ++i) {
            const double t = std::exp(std::log(dphi_min) +
                                      (std::log(dphi_max) - std::log(dphi_min)) * i / 256.0);
            sup_reg = std::max(sup_reg, s2.log_derivative_t(t));
        }
        const double delta = std::max(1e-3, 1.0 - sup_reg);
        // int V^{-K}/psi = (V(lo)^{1-K} - V(hi)^{1-K})/(1-K), closed form
        const double integral = (std::pow(psi.v_tail(dphi_min), 1.0 - K) -
                                 std::pow(psi.v_tail(dphi_max), 1.0 - K)) /
                                (1.0 - K);
        const double G0 = dphi_min / s2.eval(dphi_min);
        const double eta = delta * G0 * std::log1p(1.0 / G0);
        rep.eta = eta;
        rep.delta_used = delta;
        rep.theoretical_bound = (1.0 / s1.eval(dphi_min) + integral / eta + 1.0) +
                                (1.0 / s1.eval(dphi_min) + integral / delta + 1.0);
    }
    return rep;
}

} // namespace wvlab

#endif
