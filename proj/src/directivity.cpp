#include "pat/directivity.hpp"

#include "pat/common.hpp"

#include <cmath>
#include <string>

namespace pat {

namespace {

void require_angle(double theta_deg) {
    if (!(theta_deg >= 0.0 && theta_deg <= 90.0)) {
        throw ConfigError("incidence angle must lie in [0, 90] degrees (got " +
                          std::to_string(theta_deg) + ")");
    }
}

// exact at the endpoints so that grazing incidence gives R = -1, D = 0
double cos_deg(double theta_deg) {
    return theta_deg == 90.0 ? 0.0 : std::cos(theta_deg * M_PI / 180.0);
}

double sin_deg(double theta_deg) {
    return theta_deg == 90.0 ? 1.0 : std::sin(theta_deg * M_PI / 180.0);
}

double alpha_of(const MediumParams& p) { return p.rho * p.c / (p.rho_b * p.c_b); }

}  // namespace

double reflection_coefficient(double theta_deg, double alpha) {
    require_angle(theta_deg);
    if (!(alpha > 0.0)) {
        throw ConfigError("impedance ratio must be positive");
    }
    const double c = cos_deg(theta_deg);
    return (c - alpha) / (c + alpha);
}

double directivity(double theta_deg, const MediumParams& params) {
    params.validate();
    const double R = reflection_coefficient(theta_deg, alpha_of(params));
    const double s = sin_deg(theta_deg);
    const double ratio = params.c_s / params.c;
    const double d = (1.0 + R) * (1.0 - ratio * ratio * s * s);
    return d == 0.0 ? 0.0 : d;  // no negative zero at grazing incidence
}

std::optional<double> critical_angle(const MediumParams& params) {
    params.validate();
    if (params.c >= params.c_s) {
        return std::nullopt;
    }
    return std::asin(params.c / params.c_s) * 180.0 / M_PI;
}

std::optional<double> directivity_zero(const MediumParams& params, double tol) {
    double lo = 0.0;
    // 90 itself is always a zero; search just inside it
    double hi = 90.0 - 1e-9;
    double f_lo = directivity(lo, params);
    const double f_hi = directivity(hi, params);
    if (f_lo == 0.0) {
        return lo;
    }
    if ((f_lo > 0.0) == (f_hi > 0.0)) {
        return std::nullopt;
    }
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) {
            break;
        }
        const double f_mid = directivity(mid, params);
        if (f_mid == 0.0) {
            return mid;
        }
        if ((f_mid > 0.0) == (f_lo > 0.0)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

std::vector<DirectivitySample> directivity_curve(const MediumParams& params, double step_deg) {
    if (!(step_deg > 0.0 && step_deg <= 90.0)) {
        throw ConfigError("angle step must lie in (0, 90] degrees");
    }
    const double alpha = alpha_of(params);
    const int n = static_cast<int>(std::ceil(90.0 / step_deg - 1e-9));
    std::vector<DirectivitySample> out;
    out.reserve(n + 1);
    for (int i = 0; i <= n; ++i) {
        const double theta = i == n ? 90.0 : i * step_deg;
        out.push_back({theta, reflection_coefficient(theta, alpha), directivity(theta, params)});
    }
    return out;
}

}  // namespace pat
