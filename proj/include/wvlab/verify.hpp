#ifndef WVLAB_VERIFY_HPP
#define WVLAB_VERIFY_HPP

#include <cmath>
#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "wvlab/common.hpp"
#include "wvlab/counterexample.hpp"
#include "wvlab/entire.hpp"
#include "wvlab/weights.hpp"

namespace wvlab {

/// Verdict of one flat-disk check: the power-law quotient
/// f(z) (z_r/z)^a / f(z_r) sampled over the disk of radius r/sqrt(psi(a)).
struct DiskReport {
    double r = 0.0;
    double theta_star = 0.0;
    double a_used = 0.0;
    double radius_tested = 0.0;
    int n_samples = 0;
    int excluded_samples = 0;
    double max_deviation = 0.0;
    bool pass = false;
    bool a_below_t0 = false; // fallback radius r/sqrt(psi(t0)) was used
    std::string flag;        // nonempty marks a row-level failure (not a verdict)
};

namespace detail {

// |e^{x+iy} - 1|, stable for small x, y.
inline double expm1_mag(double x, double y) {
    const double ex = std::expm1(x);
    const double s = std::sin(0.5 * y);
    return std::sqrt(ex * ex + 4.0 * std::exp(x) * s * s);
}

} // namespace detail

/// Check the flat-disk approximation at one radius.
///
/// a is the logd value (the quotient identity is exact for monomials with
/// that choice, isolating the content of the approximation).  Samples are
/// n_samples boundary angles plus an interior ring at half radius; the
/// quotient is evaluated wholly in log space.  When a < t0 the disk radius
/// falls back to r/sqrt(psi(t0)) and the report carries a_below_t0.
inline DiskReport verify_disk(const PowerSeries& f, double r, const WeightFunction& psi,
                              int n_samples = 64, double tol = 0.05,
                              int angular_budget = 64, const ScanOptions& opt = {}) {
    if (!(r > 0.0)) throw std::domain_error("verify_disk: r must be positive");
    if (n_samples < 4) throw std::invalid_argument("verify_disk: n_samples must be >= 4");
    if (psi.classify() != Convergence::Convergent)
        throw std::domain_error("verify_disk: psi must satisfy the convergence hypothesis");

    DiskReport rep;
    rep.r = r;
    rep.n_samples = 2 * n_samples;

    const MaxModulusResult mm = max_modulus(f, r, angular_budget, opt);
    rep.theta_star = mm.theta_star;
    const double a = log_derivative(f, r, DerivMethod::logd, angular_budget, opt);
    rep.a_used = a;

    // (reg) with L < 2 on the range the disk actually touches
    {
        const double hi = std::max(2.0 * std::max(a, psi.t0()), psi.t0() * 1.01);
        const RegularityBounds rb = psi.regularity_bounds(psi.t0(), hi, 128);
        if (!(rb.L_est <= 2.0 + 1e-9))
            throw std::domain_error("verify_disk: regularity sup L >= 2 on range");
        if (!(rb.K_est > 0.0))
            throw std::domain_error("verify_disk: regularity inf K <= 0 on range");
    }

    double a_eff = a;
    if (a < psi.t0()) {
        rep.a_below_t0 = true;
        a_eff = psi.t0();
    }
    rep.radius_tested = r / std::sqrt(psi.eval(a_eff));

    const std::complex<double> z_r = std::polar(r, mm.theta_star);
    const EvalResult f_zr = eval(f, std::log(r), mm.theta_star, opt);

    double worst = 0.0;
    for (int ring = 0; ring < 2; ++ring) {
        const double rad = ring == 0 ? rep.radius_tested : 0.5 * rep.radius_tested;
        for (int j = 0; j < n_samples; ++j) {
            const double phi = 2.0 * kPi * j / n_samples;
            const std::complex<double> z = z_r + std::polar(rad, phi);
            const double az = std::abs(z);
            if (!(az > 0.0)) {
                ++rep.excluded_samples; // disk reached the origin
                continue;
            }
            try {
                const EvalResult f_z = eval(f, std::log(az), std::arg(z), opt);
                const double x =
                    f_z.value.log_mag - f_zr.value.log_mag - a * (std::log(az) - std::log(r));
                const double y = wrap_angle(f_z.value.phase - f_zr.value.phase -
                                            a * wrap_angle(std::arg(z) - mm.theta_star));
                worst = std::max(worst, detail::expm1_mag(x, y));
            } catch (const PrecisionLossError&) {
                ++rep.excluded_samples;
            }
        }
    }
    rep.max_deviation = worst;
    rep.pass = worst <= tol;
    if (rep.excluded_samples * 10 > rep.n_samples) {
        rep.pass = false;
        rep.flag = "more than 10% of samples excluded";
    }
    return rep;
}

struct SweepResult {
    std::vector<DiskReport> reports;
    double exceptional_log_measure = 0.0; // sum of failing cells in log r
    int failed = 0;
    int skipped = 0; // rows without a valid disk (a < t0 or row error)
};

/// Run verify_disk over a geometric radius grid.  Rows whose a(r) sits below
/// psi's domain are skipped (reported, not failed); genuine verdict failures
/// accumulate exceptional log-measure by grid cell.
inline SweepResult sweep(const PowerSeries& f, const WeightFunction& psi, double r_lo,
                         double r_hi, int pts, double tol, int n_samples = 64,
                         const ScanOptions& opt = {}) {
    if (!(r_lo > 0.0) || !(r_hi > r_lo) || pts < 2)
        throw std::invalid_argument("sweep: bad radius grid");
    SweepResult out;
    const double la = std::log(r_lo), lb = std::log(r_hi);
    const double cell = (lb - la) / (pts - 1);
    for (int i = 0; i < pts; ++i) {
        const double r = std::exp(la + cell * i);
        DiskReport rep;
        try {
            rep = verify_disk(f, r, psi, n_samples, tol, 64, opt);
        } catch (const std::exception& e) {
            rep.r = r;
            rep.flag = e.what();
            rep.pass = false;
        }
        const bool has_verdict = rep.flag.empty() && !rep.a_below_t0;
        if (!has_verdict) {
            ++out.skipped;
        } else if (!rep.pass) {
            ++out.failed;
            const double lo = (i == 0) ? la : la + cell * (i - 0.5);
            const double hi = (i == pts - 1) ? lb : la + cell * (i + 0.5);
            out.exceptional_log_measure += hi - lo;
        }
        out.reports.push_back(std::move(rep));
    }
    return out;
}

struct AsymptoticsRow {
    double r = 0.0;
    double log_m_lower = 0.0;
    double log_m_upper = 0.0;
    double a0 = 0.0;
    double a1 = 0.0;
    double ratio_lower = 0.0; // logM_lower / A0
    double ratio_upper = 0.0; // logM_upper / A0
    double a_num = std::numeric_limits<double>::quiet_NaN(); // d(mid)/d log r
    double ratio_a = std::numeric_limits<double>::quiet_NaN(); // a_num / A1
};

struct AsymptoticsTable {
    std::vector<AsymptoticsRow> rows;
};

/// Growth diagnostics for the product construction: both log M bounds
/// against A0, and the numeric log-derivative of their midpoint against A1.
inline AsymptoticsTable check_asymptotics(const ProductFunction& pf, int pts = 64) {
    const double r_lo = pf.scales().h(2.0);
    const double r_hi = pf.r_max_valid();
    if (!(r_hi > r_lo)) throw std::domain_error("check_asymptotics: empty radius range");
    AsymptoticsTable out;
    const double la = std::log(r_lo), lb = std::log(r_hi);
    std::vector<double> mid(pts);
    for (int i = 0; i < pts; ++i) {
        AsymptoticsRow row;
        row.r = std::exp(la + (lb - la) * i / (pts - 1));
        row.log_m_lower = pf.logM_lower(row.r);
        row.log_m_upper = pf.logM_upper(row.r);
        row.a0 = pf.scales().A0(row.r);
        row.a1 = pf.scales().A1(row.r);
        row.ratio_lower = row.log_m_lower / row.a0;
        row.ratio_upper = row.log_m_upper / row.a0;
        mid[i] = 0.5 * (row.log_m_lower + row.log_m_upper);
        out.rows.push_back(row);
    }
    const double dx = (lb - la) / (pts - 1);
    for (int i = 1; i + 1 < pts; ++i) {
        out.rows[i].a_num = (mid[i + 1] - mid[i - 1]) / (2.0 * dx);
        out.rows[i].ratio_a = out.rows[i].a_num / out.rows[i].a1;
    }
    return out;
}

} // namespace wvlab

#endif
