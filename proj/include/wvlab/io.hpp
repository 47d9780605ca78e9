#ifndef WVLAB_IO_HPP
#define WVLAB_IO_HPP

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "wvlab/counterexample.hpp"
#include "wvlab/entire.hpp"
#include "wvlab/growth_scales.hpp"
#include "wvlab/verify.hpp"

namespace wvlab {

/// 17 significant digits: decimal text round-trips to the same double.
inline std::string format_full(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

inline std::string csv_field(double x) { return std::isnan(x) ? "" : format_full(x); }

inline void write_profile_csv(const GrowthProfile& p, std::ostream& os) {
    os << "r,log_mu,nu,log_M,theta_star,a_fd,a_logd,disk_radius\n";
    for (const ProfileRow& row : p.rows) {
        os << format_full(row.r) << ',';
        if (row.flag.empty()) {
            os << format_full(row.log_mu) << ',' << row.nu << ',' << format_full(row.log_M)
               << ',' << format_full(row.theta_star) << ',' << csv_field(row.a_fd) << ','
               << csv_field(row.a_logd) << ',' << csv_field(row.disk_radius);
        } else {
            os << ",,,,,,";
        }
        os << '\n';
    }
}

inline void write_scales_csv(const GrowthScales& s, std::ostream& os) {
    os << "r,A0,A1,A2,A3,g\n";
    for (std::size_t i = 0; i < s.grid_size(); ++i) {
        os << format_full(s.node_r(i)) << ',' << format_full(s.node_A0(i)) << ','
           << format_full(s.node_A1(i)) << ',' << format_full(s.node_A2(i)) << ','
           << format_full(s.node_A3(i)) << ',' << format_full(s.node_g(i)) << '\n';
    }
}

inline void write_disk_csv(const std::vector<DiskReport>& reports, std::ostream& os) {
    os << "r,a,radius,max_deviation,verdict,excluded_samples\n";
    for (const DiskReport& rep : reports) {
        const char* verdict = !rep.flag.empty()         ? "error"
                              : rep.a_below_t0          ? "skip"
                              : rep.pass                ? "pass"
                                                        : "fail";
        os << format_full(rep.r) << ',' << format_full(rep.a_used) << ','
           << format_full(rep.radius_tested) << ',' << format_full(rep.max_deviation) << ','
           << verdict << ',' << rep.excluded_samples << '\n';
    }
}

/// Nearest-zero certificates on |z| = r: distance against 9r/sqrt(A2(r)).
inline void write_zero_certificates_csv(const ProductFunction& pf, double r, int n_theta,
                                        std::ostream& os) {
    os << "theta,distance,bound_9r_over_sqrtA2,pass\n";
    const double bound = 9.0 * r / std::sqrt(pf.scales().A2(r));
    for (int i = 0; i < n_theta; ++i) {
        const double theta = 2.0 * kPi * i / n_theta;
        const double d = pf.nearest_zero(r, theta).distance;
        os << format_full(theta) << ',' << format_full(d) << ',' << format_full(bound) << ','
           << (d <= bound ? "true" : "false") << '\n';
    }
}

inline void write_asymptotics_csv(const AsymptoticsTable& t, std::ostream& os) {
    os << "r,logM_lower,logM_upper,A0,A1,ratio_lower,ratio_upper,a_num,ratio_a\n";
    for (const AsymptoticsRow& row : t.rows) {
        os << format_full(row.r) << ',' << format_full(row.log_m_lower) << ','
           << format_full(row.log_m_upper) << ',' << format_full(row.a0) << ','
           << format_full(row.a1) << ',' << format_full(row.ratio_lower) << ','
           << format_full(row.ratio_upper) << ',' << csv_field(row.a_num) << ','
           << csv_field(row.ratio_a) << '\n';
    }
}

} // namespace wvlab

#endif
