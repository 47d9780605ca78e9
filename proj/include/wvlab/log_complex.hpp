#ifndef WVLAB_LOG_COMPLEX_HPP
#define WVLAB_LOG_COMPLEX_HPP

#include <cmath>
#include <complex>

#include "wvlab/common.hpp"

namespace wvlab {

/// Complex value stored as (log-magnitude, phase).
///
/// log_mag is the natural log of the modulus, -inf exactly when the value is
/// zero (phase 0 by convention).  Phase is normalized into (-pi, pi].  The
/// representation survives moduli far beyond double range; only ratios of
/// nearby values are ever exponentiated.
struct LogComplex {
    double log_mag = kNegInf;
    double phase = 0.0;

    static LogComplex zero() { return {kNegInf, 0.0}; }

    static LogComplex from_log_polar(double lm, double ph) {
        if (lm == kNegInf) return zero();
        return {lm, wrap_angle(ph)};
    }

    static LogComplex from_real(double x) {
        if (x == 0.0) return zero();
        return {std::log(std::fabs(x)), x > 0 ? 0.0 : kPi};
    }

    static LogComplex from_complex(std::complex<double> z) {
        const double m = std::abs(z);
        if (m == 0.0) return zero();
        return {std::log(m), std::arg(z)};
    }

    bool is_zero() const { return log_mag == kNegInf; }

    /// Value as ordinary complex; overflows to inf if log_mag is too large.
    std::complex<double> to_complex() const {
        if (is_zero()) return {0.0, 0.0};
        return std::polar(std::exp(log_mag), phase);
    }
};

inline LogComplex operator*(const LogComplex& a, const LogComplex& b) {
    if (a.is_zero() || b.is_zero()) return LogComplex::zero();
    return LogComplex::from_log_polar(a.log_mag + b.log_mag, a.phase + b.phase);
}

inline LogComplex operator/(const LogComplex& a, const LogComplex& b) {
    if (b.is_zero()) throw std::domain_error("LogComplex: division by zero");
    if (a.is_zero()) return LogComplex::zero();
    return LogComplex::from_log_polar(a.log_mag - b.log_mag, a.phase - b.phase);
}

/// a^p for real p (principal branch of the phase).
inline LogComplex pow(const LogComplex& a, double p) {
    if (a.is_zero()) return p == 0.0 ? LogComplex::from_real(1.0) : LogComplex::zero();
    return LogComplex::from_log_polar(p * a.log_mag, p * a.phase);
}

} // namespace wvlab

#endif
