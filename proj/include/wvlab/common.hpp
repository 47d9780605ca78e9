#ifndef WVLAB_COMMON_HPP
#define WVLAB_COMMON_HPP

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace wvlab {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kPosInf = std::numeric_limits<double>::infinity();
inline constexpr double kPi = 3.14159265358979323846;

// Largest natural-log magnitude we allow in tabulated scale values before a
// build aborts.  Keeps every exp() of a stored value inside double range.
inline constexpr double kLogSpaceGuard = 700.0;

/// Neumaier-compensated accumulator for long monotone-ish sums.
class KahanSum {
  public:
    void add(double x) {
        double t = sum_ + x;
        if (std::fabs(sum_) >= std::fabs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

  private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

inline bool nearly_equal(double a, double b, double rel, double abs = 0.0) {
    return std::fabs(a - b) <= std::max(abs, rel * std::max(std::fabs(a), std::fabs(b)));
}

/// Wrap an angle into (-pi, pi].
inline double wrap_angle(double phi) {
    if (std::isnan(phi)) return phi;
    phi = std::remainder(phi, 2.0 * kPi);
    if (phi <= -kPi) phi += 2.0 * kPi;
    return phi;
}

[[noreturn]] inline void domain_fail(const std::string& what) {
    throw std::domain_error(what);
}

} // namespace wvlab

#endif
