#ifndef WVLAB_ENTIRE_HPP
#define WVLAB_ENTIRE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "wvlab/common.hpp"
#include "wvlab/log_complex.hpp"
#include "wvlab/power_series.hpp"
#include "wvlab/reports.hpp"
#include "wvlab/weights.hpp"

namespace wvlab {

/// Compensated complex sum lost all significant digits (evaluation too close
/// to a zero of f, or a genuinely cancelling series direction).
class PrecisionLossError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct ScanOptions {
    double margin = 50.0;        // stop once terms sit this far below the max (log units)
    std::int64_t hard_cap = 10'000'000;
};

struct MaxTermResult {
    double log_mu = kNegInf;
    std::int64_t nu = 0;
};

namespace detail {

inline std::int64_t scan_window(std::int64_t nu) {
    return static_cast<std::int64_t>(
               std::ceil(std::sqrt(static_cast<double>(std::max<std::int64_t>(nu, 0))))) +
           16;
}

} // namespace detail

/// Maximum term and central index at radius r.
///
/// Scans the nonzero support upward.  Stops once the running term has fallen
/// `margin` log-units below the current maximum and stayed there for
/// ceil(sqrt(nu))+16 consecutive nonzero terms; counting nonzero terms (not
/// raw indices) is what lets lacunary series with gaps wider than the window
/// come back.  Exact ties go to the larger index.
inline MaxTermResult max_term(const PowerSeries& f, double r, const ScanOptions& opt = {}) {
    if (!(r > 0.0)) throw std::domain_error("max_term: r must be positive");
    const double lr = std::log(r);
    MaxTermResult best;
    bool have = false;
    std::int64_t below = 0;
    std::int64_t n = f.next_nonzero(0);
    while (n >= 0) {
        if (n > opt.hard_cap)
            throw std::runtime_error("max_term: scan exceeded hard cap (not entire on this range?)");
        const LogComplex c = f.log_coeff(n);
        if (!c.is_zero()) {
            const double t = c.log_mag + static_cast<double>(n) * lr;
            const double tie = 1e-9 + 1e-12 * std::fabs(have ? best.log_mu : t);
            if (!have || t > best.log_mu + tie) {
                best.log_mu = t;
                best.nu = n;
                have = true;
                below = 0;
            } else if (t >= best.log_mu - tie) {
                best.nu = n; // tie: the larger index is the central index
                best.log_mu = std::max(best.log_mu, t);
                below = 0;
            } else if (t < best.log_mu - opt.margin) {
                if (++below >= detail::scan_window(best.nu)) break;
            } else {
                below = 0;
            }
        }
        n = f.next_nonzero(n + 1);
    }
    if (!have) throw std::domain_error("max_term: series has no nonzero coefficients");
    return best;
}

struct EvalResult {
    LogComplex value;
    double log_tail = kNegInf; // log of the bound on neglected |terms|
};

/// f(z) for z = exp(log_r + i theta), in log space.
///
/// The maximum term at |z| is factored out and the remaining sum is
/// accumulated in ordinary complex arithmetic with compensated summation,
/// each addend rebuilt from log space.  The scan above and below the central
/// index uses the max_term stopping rule.
inline EvalResult eval(const PowerSeries& f, double log_r, double theta,
                       const ScanOptions& opt = {}) {
    const double r = std::exp(log_r);
    const MaxTermResult mt = max_term(f, r, opt);
    const double T = mt.log_mu;
    const std::int64_t W = detail::scan_window(mt.nu);

    struct Term {
        double rel_mag; // exp(t_n - T)
        double angle;
    };
    std::vector<Term> terms;
    terms.reserve(64);

    double t_last = T, t_prev = T;
    auto push = [&](std::int64_t n, const LogComplex& c) {
        const double t = c.log_mag + static_cast<double>(n) * log_r;
        t_prev = t_last;
        t_last = t;
        terms.push_back({std::exp(t - T), c.phase + static_cast<double>(n) * theta});
        return t;
    };

    // downward from nu
    std::int64_t below = 0;
    std::int64_t count_down = 0;
    for (std::int64_t n = mt.nu - 1; n >= 0; --n) {
        const LogComplex c = f.log_coeff(n);
        if (c.is_zero()) continue;
        const double t = push(n, c);
        ++count_down;
        if (t < T - opt.margin) {
            if (++below >= W) break;
        } else {
            below = 0;
        }
    }
    std::reverse(terms.begin(), terms.end());

    // the central term, then upward
    push(mt.nu, f.log_coeff(mt.nu));
    below = 0;
    double q_up = 0.0; // decay ratio estimate past the cut
    std::int64_t n = f.next_nonzero(mt.nu + 1);
    while (n >= 0) {
        if (n > opt.hard_cap) throw std::runtime_error("eval: scan exceeded hard cap");
        const LogComplex c = f.log_coeff(n);
        if (!c.is_zero()) {
            const double t = push(n, c);
            if (t < T - opt.margin) {
                if (++below >= W) {
                    q_up = std::exp(t_last - t_prev);
                    break;
                }
            } else {
                below = 0;
            }
        }
        n = f.next_nonzero(n + 1);
    }

    KahanSum re, im;
    double max_partial = 0.0;
    for (const Term& t : terms) {
        re.add(t.rel_mag * std::cos(t.angle));
        im.add(t.rel_mag * std::sin(t.angle));
        max_partial = std::max(max_partial, std::hypot(re.value(), im.value()));
    }
    const double mag = std::hypot(re.value(), im.value());
    if (mag < 1e-13 * max_partial)
        throw PrecisionLossError("eval: catastrophic cancellation at r=" + std::to_string(r) +
                                 " theta=" + std::to_string(theta));

    // Tail estimate: everything neglected sits margin units below T; allow
    // W-term plateaus plus a geometric continuation at the observed ratio.
    const double q = std::min(std::max(q_up, std::exp(-opt.margin / (2.0 * W))), 0.95);
    const double count = static_cast<double>(W + count_down) + 2.0 / (1.0 - q);
    EvalResult out;
    out.value = LogComplex::from_log_polar(T + std::log(mag), std::atan2(im.value(), re.value()));
    out.log_tail = T - opt.margin + std::log(count);
    return out;
}

inline EvalResult eval_at(const PowerSeries& f, double r, double theta,
                          const ScanOptions& opt = {}) {
    if (!(r > 0.0)) throw std::domain_error("eval: r must be positive");
    return eval(f, std::log(r), theta, opt);
}

struct MaxModulusResult {
    double log_M = kNegInf;
    double theta_star = 0.0;
};

/// M(r,f) and a maximizer angle.
///
/// Positive-coefficient series peak on the positive real axis; otherwise a
/// coarse scan over `angular_budget` angles is refined by golden-section
/// search to angular tolerance 1e-10.
inline MaxModulusResult max_modulus(const PowerSeries& f, double r, int angular_budget = 64,
                                    const ScanOptions& opt = {}) {
    if (!(r > 0.0)) throw std::domain_error("max_modulus: r must be positive");
    if (angular_budget < 8)
        throw std::invalid_argument("max_modulus: angular_budget must be >= 8");
    const double log_r = std::log(r);
    if (f.known_positive) {
        return {eval(f, log_r, 0.0, opt).value.log_mag, 0.0};
    }
    auto probe = [&](double th) -> double {
        try {
            return eval(f, log_r, th, opt).value.log_mag;
        } catch (const PrecisionLossError&) {
            return kNegInf; // a cancelling direction is certainly not the max
        }
    };
    double best_th = 0.0, best_v = kNegInf;
    for (int j = 0; j < angular_budget; ++j) {
        const double th = 2.0 * kPi * j / angular_budget;
        const double v = probe(th);
        if (v > best_v) {
            best_v = v;
            best_th = th;
        }
    }
    // golden-section refinement around the best coarse angle
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = best_th - 2.0 * kPi / angular_budget;
    double b = best_th + 2.0 * kPi / angular_budget;
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = probe(x1), f2 = probe(x2);
    while (b - a > 1e-10) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = probe(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = probe(x1);
        }
    }
    const double th = 0.5 * (a + b);
    const double v = probe(th);
    if (v > best_v) {
        best_v = v;
        best_th = th;
    }
    return {best_v, wrap_angle(best_th)};
}

enum class DerivMethod { finite_diff, logd };

/// Finite-difference and logd values disagree beyond the fd error estimate:
/// either a corner of log M (countable exceptional set) or numerical failure.
class DerivativeDisagreement : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline double fd_step(const PowerSeries& f, double r, const ScanOptions& opt) {
    const double nu = static_cast<double>(std::max<std::int64_t>(max_term(f, r, opt).nu, 3));
    const double scale = 1.0 / std::sqrt(nu * std::pow(std::log(nu), 2));
    return std::min(0.03, std::max(1e-6, scale));
}

struct FdResult {
    double a = 0.0;
    double error = 0.0;
};

inline FdResult a_finite_diff(const PowerSeries& f, double r, int budget,
                              const ScanOptions& opt) {
    const double eta = fd_step(f, r, opt);
    auto diff = [&](double e) {
        const double up = max_modulus(f, r * std::exp(e), budget, opt).log_M;
        const double dn = max_modulus(f, r * std::exp(-e), budget, opt).log_M;
        return (up - dn) / (2.0 * e);
    };
    const double d1 = diff(eta);
    const double d2 = diff(0.5 * eta);
    FdResult out;
    out.a = (4.0 * d2 - d1) / 3.0; // Richardson: kills the eta^2 term
    const double log_m = max_modulus(f, r, budget, opt).log_M;
    out.error = std::fabs(d2 - d1) / 3.0 + 2e-13 * std::max(1.0, std::fabs(log_m)) / eta +
                1e-11 * std::fabs(out.a);
    return out;
}

inline double a_logd(const PowerSeries& f, double r, int budget, const ScanOptions& opt) {
    const MaxModulusResult mm = max_modulus(f, r, budget, opt);
    const PowerSeries fp = f.derivative();
    const double log_r = std::log(r);
    const EvalResult num = eval(fp, log_r, mm.theta_star, opt);
    const EvalResult den = eval(f, log_r, mm.theta_star, opt);
    if (den.value.is_zero()) throw std::domain_error("log_derivative: f vanishes at maximizer");
    const LogComplex ratio = LogComplex::from_log_polar(
        log_r + num.value.log_mag - den.value.log_mag,
        mm.theta_star + num.value.phase - den.value.phase);
    return std::exp(ratio.log_mag) * std::cos(ratio.phase);
}

} // namespace detail

/// a(r,f): growth of log M in log r, by the requested method.
inline double log_derivative(const PowerSeries& f, double r, DerivMethod method,
                             int angular_budget = 64, const ScanOptions& opt = {}) {
    if (!(r > 0.0)) throw std::domain_error("log_derivative: r must be positive");
    if (method == DerivMethod::finite_diff)
        return detail::a_finite_diff(f, r, angular_budget, opt).a;
    return detail::a_logd(f, r, angular_budget, opt);
}

struct LogDerivativePair {
    double a_fd = 0.0;
    double a_logd = 0.0;
    double fd_error = 0.0;
};

/// Both routes at once, with the cross-check the two must satisfy.
inline LogDerivativePair log_derivative_both(const PowerSeries& f, double r,
                                             int angular_budget = 64,
                                             const ScanOptions& opt = {}) {
    LogDerivativePair out;
    const detail::FdResult fd = detail::a_finite_diff(f, r, angular_budget, opt);
    out.a_fd = fd.a;
    out.fd_error = fd.error;
    out.a_logd = detail::a_logd(f, r, angular_budget, opt);
    const double scale = std::max(std::fabs(out.a_fd), std::fabs(out.a_logd));
    if (std::fabs(out.a_fd - out.a_logd) > std::max(1e-3 * scale, fd.error))
        throw DerivativeDisagreement("log_derivative: fd=" + std::to_string(out.a_fd) +
                                     " logd=" + std::to_string(out.a_logd) + " at r=" +
                                     std::to_string(r));
    return out;
}

struct ProfileRow {
    double r = 0.0;
    double log_mu = kNegInf;
    std::int64_t nu = 0;
    double log_M = kNegInf;
    double theta_star = 0.0;
    double a_fd = std::numeric_limits<double>::quiet_NaN();
    double a_logd = std::numeric_limits<double>::quiet_NaN();
    double disk_radius = std::numeric_limits<double>::quiet_NaN(); // absent when a < t0
    std::string flag; // empty when the row is clean
};

struct GrowthProfile {
    std::vector<ProfileRow> rows;
};

/// One row per grid radius; per-row failures become row flags, never aborts.
inline GrowthProfile profile(const PowerSeries& f, const std::vector<double>& r_grid,
                             const std::optional<WeightFunction>& psi = std::nullopt,
                             int angular_budget = 64, const ScanOptions& opt = {}) {
    for (std::size_t i = 1; i < r_grid.size(); ++i)
        if (!(r_grid[i] > r_grid[i - 1]))
            throw std::invalid_argument("profile: r grid must be increasing");
    GrowthProfile out;
    out.rows.reserve(r_grid.size());
    for (const double r : r_grid) {
        ProfileRow row;
        row.r = r;
        try {
            const MaxTermResult mt = max_term(f, r, opt);
            row.log_mu = mt.log_mu;
            row.nu = mt.nu;
            const MaxModulusResult mm = max_modulus(f, r, angular_budget, opt);
            row.log_M = mm.log_M;
            row.theta_star = mm.theta_star;
            const LogDerivativePair a = log_derivative_both(f, r, angular_budget, opt);
            row.a_fd = a.a_fd;
            row.a_logd = a.a_logd;
            if (psi && row.a_logd >= psi->t0())
                row.disk_radius = r / std::sqrt(psi->eval(row.a_logd));
        } catch (const std::exception& e) {
            row.flag = e.what();
        }
        out.rows.push_back(std::move(row));
    }
    return out;
}

/// Scan a profile for radii where a(r) > psi(log M(r)) and measure the
/// flagged set in log r.  Rows with log M below psi's domain are excluded
/// (counted, not flagged); for convergent psi the bound int_{s0}^oo dt/psi
/// is attached.
inline ExceptionalSetReport alogM_scan(const GrowthProfile& profile, const WeightFunction& psi) {
    ExceptionalSetReport rep;
    std::vector<double> xs;
    std::vector<bool> flagged;
    std::optional<double> s0;
    for (const ProfileRow& row : profile.rows) {
        if (!row.flag.empty() || std::isnan(row.a_logd)) {
            ++rep.excluded_points;
            continue;
        }
        if (row.log_M < psi.t0()) {
            ++rep.excluded_points;
            continue;
        }
        if (!s0) s0 = row.log_M;
        xs.push_back(std::log(row.r));
        flagged.push_back(row.a_logd > psi.eval(row.log_M));
    }
    if (!xs.empty()) detail::assemble_intervals(xs, flagged, rep);
    if (s0 && psi.classify() == Convergence::Convergent)
        rep.theoretical_bound = psi.v_tail(std::max(*s0, psi.t0()));
    return rep;
}

} // namespace wvlab

#endif
