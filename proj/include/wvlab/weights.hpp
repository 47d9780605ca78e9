#ifndef WVLAB_WEIGHTS_HPP
#define WVLAB_WEIGHTS_HPP

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

#include "wvlab/common.hpp"
#include "wvlab/quadrature.hpp"

namespace wvlab {

enum class Convergence { Convergent, Divergent };

struct RegularityBounds {
    double K_est = 0.0;
    double L_est = 0.0;
};

/// Weight function psi(t) = c_pre * t * log t * ... * log^{m-1} t * (log^m t)^alpha.
///
/// The family is positive and increasing on [t0, oo) once every iterated log
/// is positive at t0; the constructor enforces that together with the
/// normalization psi(t0) >= t0 >= 1.
class WeightFunction {
  public:
    WeightFunction(int m, double alpha, double t0, double c_pre = 1.0)
        : m_(m), alpha_(alpha), t0_(t0), c_pre_(c_pre) {
        if (m_ < 1) throw std::invalid_argument("WeightFunction: m must be >= 1");
        if (!(alpha_ > 0.0)) throw std::invalid_argument("WeightFunction: alpha must be > 0");
        if (!(c_pre_ > 0.0)) throw std::invalid_argument("WeightFunction: c_pre must be > 0");
        if (!(t0_ >= 1.0)) throw std::domain_error("WeightFunction: t0 must be >= 1");
        if (!(deepest_log(t0_) > 0.0))
            throw std::domain_error("WeightFunction: iterated log nonpositive at t0");
        if (eval(t0_) < t0_)
            throw std::domain_error("WeightFunction: psi(t0) < t0 violates normalization");
    }

    int m() const { return m_; }
    double alpha() const { return alpha_; }
    double t0() const { return t0_; }
    double c_pre() const { return c_pre_; }

    /// psi(t); closed-form product of iterated logs.
    double eval(double t) const {
        check_domain(t);
        double v = c_pre_ * t;
        double l = t;
        for (int j = 1; j < m_; ++j) {
            l = std::log(l);
            v *= l;
        }
        l = std::log(l);
        return v * std::pow(l, alpha_);
    }

    /// t * psi'(t) / psi(t), by logarithmic differentiation of the factors.
    double log_derivative_t(double t) const {
        check_domain(t);
        double v = 1.0;
        double prod = 1.0; // L1 * ... * Lj
        double l = t;
        for (int j = 1; j <= m_; ++j) {
            l = std::log(l);
            prod *= l;
            v += (j < m_ ? 1.0 : alpha_) / prod;
        }
        return v;
    }

    /// psi'(t).
    double eval_derivative(double t) const {
        return eval(t) * log_derivative_t(t) / t;
    }

    /// (conv) vs (div) by the analytic alpha rule.
    Convergence classify() const {
        return alpha_ > 1.0 ? Convergence::Convergent : Convergence::Divergent;
    }

    /// Quadrature estimate of int_{t0}^{T} dt/psi, numeric evidence for classify().
    QuadResult integral_inv_psi(double T, double abs_tol = 1e-10,
                                double rel_tol = 1e-10) const {
        if (!(T >= t0_)) throw std::domain_error("integral_inv_psi: T < t0");
        return integrate([this](double t) { return 1.0 / eval(t); }, t0_, T, abs_tol,
                         rel_tol);
    }

    /// phi(t) = int_{t0}^{t} du/psi(u), closed form via the log-iterate substitution.
    double phi(double t) const {
        check_domain(t);
        return phi_primitive(t) - phi_primitive(t0_);
    }

    /// V(t) = int_t^oo du/psi(u); requires (conv), i.e. alpha > 1.
    double v_tail(double t) const {
        if (alpha_ <= 1.0)
            throw std::domain_error("v_tail: integral diverges for alpha <= 1");
        check_domain(t);
        return std::pow(iter_log(t, m_), 1.0 - alpha_) / ((alpha_ - 1.0) * c_pre_);
    }

    /// inf/sup of t psi'/psi over a geometric grid on [t_lo, t_hi], endpoints included.
    RegularityBounds regularity_bounds(double t_lo, double t_hi, int n_samples) const {
        if (!(t_lo >= t0_) || !(t_hi > t_lo) || n_samples < 2)
            throw std::domain_error("regularity_bounds: bad sampling interval");
        RegularityBounds rb{kPosInf, -kPosInf};
        const double la = std::log(t_lo), lb = std::log(t_hi);
        for (int i = 0; i < n_samples; ++i) {
            const double t = std::exp(la + (lb - la) * i / (n_samples - 1));
            const double w = log_derivative_t(t);
            rb.K_est = std::min(rb.K_est, w);
            rb.L_est = std::max(rb.L_est, w);
        }
        return rb;
    }

    /// Default left endpoint: smallest t = e^k (integer k) at which
    /// t psi'/psi has dropped to the target sup (6/5 for divergent members,
    /// 3/2 for convergent ones) and the normalization holds.
    static double default_t0(int m, double alpha, double c_pre = 1.0) {
        const double target = (alpha <= 1.0 ? 1.2 : 1.5) + 1e-12;
        for (int k = 1; k <= 600; ++k) {
            const double t = std::exp(static_cast<double>(k));
            WeightFunction probe(m, alpha, 1.0, c_pre, UncheckedTag{});
            if (!(probe.deepest_log(t) > 0.0)) continue;
            if (probe.eval(t) < t) continue;
            if (probe.log_derivative_t(t) <= target) return t;
        }
        throw std::domain_error("default_t0: no admissible e^k found");
    }

  private:
    struct UncheckedTag {};
    WeightFunction(int m, double alpha, double t0, double c_pre, UncheckedTag)
        : m_(m), alpha_(alpha), t0_(t0), c_pre_(c_pre) {}

    void check_domain(double t) const {
        if (!(t >= t0_)) domain_fail("WeightFunction: t below t0");
        if (!(deepest_log(t) > 0.0))
            domain_fail("WeightFunction: iterated log nonpositive");
    }

    static double iter_log(double t, int depth) {
        for (int j = 0; j < depth; ++j) t = std::log(t);
        return t;
    }

    double deepest_log(double t) const { return iter_log(t, m_); }

    // Antiderivative of 1/psi up to a constant: with u = log^m t,
    // int dt/psi = (1/c_pre) int du/u^alpha.
    double phi_primitive(double t) const {
        const double u = iter_log(t, m_);
        if (alpha_ == 1.0) return std::log(u) / c_pre_;
        return std::pow(u, 1.0 - alpha_) / ((1.0 - alpha_) * c_pre_);
    }

    int m_;
    double alpha_;
    double t0_;
    double c_pre_;
};

/// Parse "m=1,alpha=2,t0=e5" (optionally wrapped as "psi{...}").  t0 accepts
/// "e", "e<k>", "e^<k>", "auto", or a plain number; omitting t0 means auto.
inline WeightFunction parse_psi_spec(const std::string& spec) {
    std::string s = spec;
    if (s.rfind("psi{", 0) == 0 && s.back() == '}') s = s.substr(4, s.size() - 5);
    int m = 1;
    double alpha = 1.0;
    double c_pre = 1.0;
    std::string t0_str = "auto";
    bool have_alpha = false;
    std::size_t pos = 0;
    while (pos < s.size()) {
        std::size_t end = s.find(',', pos);
        if (end == std::string::npos) end = s.size();
        const std::string item = s.substr(pos, end - pos);
        pos = end + 1;
        if (item.empty()) continue;
        const std::size_t eq = item.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("psi spec: expected key=value in '" + item + "'");
        const std::string key = item.substr(0, eq);
        const std::string val = item.substr(eq + 1);
        try {
            if (key == "m")
                m = std::stoi(val);
            else if (key == "alpha") {
                alpha = std::stod(val);
                have_alpha = true;
            } else if (key == "t0")
                t0_str = val;
            else if (key == "c" || key == "c_pre")
                c_pre = std::stod(val);
            else
                throw std::invalid_argument("psi spec: unknown key '" + key + "'");
        } catch (const std::invalid_argument&) {
            throw;
        } catch (const std::exception&) {
            throw std::invalid_argument("psi spec: bad value in '" + item + "'");
        }
    }
    if (!have_alpha) throw std::invalid_argument("psi spec: alpha is required");
    double t0;
    if (t0_str == "auto")
        t0 = WeightFunction::default_t0(m, alpha, c_pre);
    else if (t0_str == "e")
        t0 = std::exp(1.0);
    else if (t0_str[0] == 'e') {
        std::string expo = t0_str.substr(t0_str[1] == '^' ? 2 : 1);
        char* endp = nullptr;
        const double k = std::strtod(expo.c_str(), &endp);
        if (endp == expo.c_str() || *endp != '\0')
            throw std::invalid_argument("psi spec: bad t0 '" + t0_str + "'");
        t0 = std::exp(k);
    } else {
        char* endp = nullptr;
        t0 = std::strtod(t0_str.c_str(), &endp);
        if (endp == t0_str.c_str() || *endp != '\0')
            throw std::invalid_argument("psi spec: bad t0 '" + t0_str + "'");
    }
    return WeightFunction(m, alpha, t0, c_pre);
}

} // namespace wvlab

#endif
