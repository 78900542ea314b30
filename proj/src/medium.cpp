#include "pat/medium.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace pat {

namespace {

void require_positive(double value, const char* name) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw ConfigError(std::string(name) + " must be positive and finite (got " +
                          std::to_string(value) + ")");
    }
}

}  // namespace

double MediumParams::max_speed() const {
    if (c_field.empty()) {
        return c;
    }
    return *std::max_element(c_field.begin(), c_field.end());
}

void MediumParams::validate(int num_vertices) const {
    require_positive(c, "c");
    require_positive(rho, "rho");
    require_positive(c_s, "c_s");
    require_positive(rho_s, "rho_s");
    require_positive(c_b, "c_b");
    require_positive(rho_b, "rho_b");
    if (!(h >= 0.0) || !std::isfinite(h)) {
        throw ConfigError("h must be nonnegative and finite");
    }
    if (!std::isfinite(H) || !std::isfinite(K)) {
        throw ConfigError("curvature scalars must be finite");
    }
    if (!c_field.empty()) {
        if (num_vertices != 0 && static_cast<int>(c_field.size()) != num_vertices) {
            throw ConfigError("c field has " + std::to_string(c_field.size()) + " values for " +
                              std::to_string(num_vertices) + " vertices");
        }
        for (double v : c_field) {
            require_positive(v, "c field value");
        }
    }
}

MediumParams water_parylene_polycarbonate() {
    MediumParams p;
    p.c = 1500.0;
    p.rho = 1000.0;
    p.c_s = 2200.0;
    p.rho_s = 1180.0;
    p.c_b = 2180.0;
    p.rho_b = 1180.0;
    p.h = 40e-6;  // film thickness, metres
    p.H = 100.0;  // 1 cm radius disk
    p.K = 0.0;
    return p;
}

MediumParams default_nondimensional_medium() {
    return nondimensionalize(water_parylene_polycarbonate(), 0.01, 1500.0);
}

MediumParams nondimensionalize(const MediumParams& physical, double L_ref, double c_ref,
                               std::optional<double> rho_ref) {
    require_positive(L_ref, "L_ref");
    require_positive(c_ref, "c_ref");
    const double rho_scale = rho_ref.value_or(physical.rho);
    require_positive(rho_scale, "rho_ref");

    MediumParams out = physical;
    out.c = physical.c / c_ref;
    out.c_s = physical.c_s / c_ref;
    out.c_b = physical.c_b / c_ref;
    for (double& v : out.c_field) {
        v /= c_ref;
    }
    out.rho = physical.rho / rho_scale;
    out.rho_s = physical.rho_s / rho_scale;
    out.rho_b = physical.rho_b / rho_scale;
    out.h = physical.h / L_ref;
    out.H = physical.H * L_ref;
    out.K = physical.K * L_ref * L_ref;
    out.validate();
    return out;
}

MediumParams idealized_medium(const MediumParams& params) {
    MediumParams out = params;
    out.c_s = params.c;
    out.c_b = params.c;
    out.rho_s = params.rho;
    out.rho_b = params.rho;
    return out;
}

SensorCoefficients sensor_coefficients(const MediumParams& p) {
    p.validate();
    SensorCoefficients s;
    s.cs2 = p.c_s * p.c_s;
    s.a = 2.0 * p.H * s.cs2 * p.rho_s / (p.c_b * p.rho_b);
    s.b = 2.0 * p.H * p.H * s.cs2 * p.rho_s / p.rho_b;
    s.alpha = p.rho * p.c / (p.rho_b * p.c_b);
    return s;
}

}  // namespace pat
