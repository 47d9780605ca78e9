#ifndef WVLAB_POWER_SERIES_HPP
#define WVLAB_POWER_SERIES_HPP

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>

#include "wvlab/common.hpp"
#include "wvlab/log_complex.hpp"

namespace wvlab {

/// Entire function given by its power-series coefficients in log form.
///
/// log_coeff(n) returns log a_n (LogComplex::zero() for a vanishing
/// coefficient).  next_nonzero(n) returns the smallest index >= n with a
/// nonzero coefficient, or -1 when the support ends (polynomials); it lets
/// scans step across lacunary gaps without visiting every index.  Providers
/// must be deterministic and side-effect-free.
struct PowerSeries {
    std::string name;
    bool known_positive = false;
    std::function<LogComplex(std::int64_t)> log_coeff;
    std::function<std::int64_t(std::int64_t)> next_nonzero;

    /// Term-wise derivative: coefficient n+1 times a_{n+1} at index n.
    PowerSeries derivative() const {
        PowerSeries d;
        d.name = name + "'";
        d.known_positive = known_positive;
        d.log_coeff = [src = log_coeff](std::int64_t n) {
            const LogComplex c = src(n + 1);
            if (c.is_zero()) return LogComplex::zero();
            return LogComplex::from_log_polar(
                c.log_mag + std::log(static_cast<double>(n + 1)), c.phase);
        };
        d.next_nonzero = [src = next_nonzero](std::int64_t n) {
            const std::int64_t k = src(n + 1);
            return k < 1 ? std::int64_t{-1} : k - 1;
        };
        return d;
    }
};

namespace series {

inline PowerSeries make_exp() {
    PowerSeries f;
    f.name = "exp";
    f.known_positive = true;
    f.log_coeff = [](std::int64_t n) {
        return LogComplex::from_log_polar(-std::lgamma(static_cast<double>(n) + 1.0), 0.0);
    };
    f.next_nonzero = [](std::int64_t n) { return n; };
    return f;
}

inline PowerSeries make_cosh() {
    PowerSeries f;
    f.name = "cosh";
    f.known_positive = true;
    f.log_coeff = [](std::int64_t n) {
        if (n % 2 != 0) return LogComplex::zero();
        return LogComplex::from_log_polar(-std::lgamma(static_cast<double>(n) + 1.0), 0.0);
    };
    f.next_nonzero = [](std::int64_t n) { return n % 2 == 0 ? n : n + 1; };
    return f;
}

/// e^{-z}: alternating factorial coefficients.
inline PowerSeries make_expm() {
    PowerSeries f;
    f.name = "expm";
    f.known_positive = false;
    f.log_coeff = [](std::int64_t n) {
        return LogComplex::from_log_polar(-std::lgamma(static_cast<double>(n) + 1.0),
                                          n % 2 == 0 ? 0.0 : kPi);
    };
    f.next_nonzero = [](std::int64_t n) { return n; };
    return f;
}

inline PowerSeries make_monomial(std::int64_t k) {
    if (k < 0) throw std::invalid_argument("monomial: k must be >= 0");
    PowerSeries f;
    f.name = "monomial{" + std::to_string(k) + "}";
    f.known_positive = true;
    f.log_coeff = [k](std::int64_t n) {
        return n == k ? LogComplex::from_real(1.0) : LogComplex::zero();
    };
    f.next_nonzero = [k](std::int64_t n) { return n <= k ? k : std::int64_t{-1}; };
    return f;
}

/// e^{z^2}: coefficients 1/(n/2)! on even n.
inline PowerSeries make_quadexp() {
    PowerSeries f;
    f.name = "quadexp";
    f.known_positive = true;
    f.log_coeff = [](std::int64_t n) {
        if (n % 2 != 0) return LogComplex::zero();
        return LogComplex::from_log_polar(-std::lgamma(static_cast<double>(n / 2) + 1.0), 0.0);
    };
    f.next_nonzero = [](std::int64_t n) { return n % 2 == 0 ? n : n + 1; };
    return f;
}

/// a_n = 1/n! on n in {base^j : j >= 0}, zero elsewhere.
inline PowerSeries make_lacunary(std::int64_t base) {
    if (base < 2) throw std::invalid_argument("lacunary: base must be >= 2");
    PowerSeries f;
    f.name = "lacunary{" + std::to_string(base) + "}";
    f.known_positive = true;
    auto is_power = [base](std::int64_t n) {
        if (n < 1) return false;
        while (n % base == 0) n /= base;
        return n == 1;
    };
    f.log_coeff = [is_power](std::int64_t n) {
        if (!is_power(n)) return LogComplex::zero();
        return LogComplex::from_log_polar(-std::lgamma(static_cast<double>(n) + 1.0), 0.0);
    };
    f.next_nonzero = [base](std::int64_t n) {
        std::int64_t p = 1;
        while (p < n) {
            if (p > (std::int64_t{1} << 62) / base) return std::int64_t{-1};
            p *= base;
        }
        return p;
    };
    return f;
}

/// Resolve a registry name: exp, cosh, expm, quadexp, monomial{k}, lacunary{base}.
inline PowerSeries from_name(const std::string& name) {
    if (name == "exp") return make_exp();
    if (name == "cosh") return make_cosh();
    if (name == "expm") return make_expm();
    if (name == "quadexp") return make_quadexp();
    const auto brace = name.find('{');
    if (brace != std::string::npos && name.back() == '}') {
        const std::string head = name.substr(0, brace);
        const std::string arg = name.substr(brace + 1, name.size() - brace - 2);
        try {
            if (head == "monomial") return make_monomial(std::stoll(arg));
            if (head == "lacunary") return make_lacunary(std::stoll(arg));
        } catch (const std::invalid_argument&) {
        }
    }
    throw std::invalid_argument("unknown series '" + name + "'");
}

} // namespace series
} // namespace wvlab

#endif
