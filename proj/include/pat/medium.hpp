#pragma once

#include "pat/common.hpp"

#include <optional>
#include <vector>

namespace pat {

/// Acoustic medium and Fabry-Perot sensor constants.
///
/// `c` is the acoustic speed on the sensor boundary (and everywhere unless
/// `c_field` is set). `H` is the boundary mean-curvature scalar entering the
/// nonreflecting operator and the measurement coefficients; `K` the Gaussian
/// curvature, zero for plane curves.
struct MediumParams {
    double c = 1.0;
    double rho = 1.0;
    double c_s = 1.0;
    double rho_s = 1.0;
    double c_b = 1.0;
    double rho_b = 1.0;
    double h = 0.0;
    double H = 1.0;
    double K = 0.0;
    std::vector<double> c_field;  ///< optional per-vertex speed

    double speed_at(int vertex) const { return c_field.empty() ? c : c_field[vertex]; }
    double max_speed() const;

    /// Throws ConfigError naming the offending parameter. `num_vertices`, when
    /// nonzero, is checked against the length of `c_field`.
    void validate(int num_vertices = 0) const;

    bool operator==(const MediumParams&) const = default;
};

/// Water / Parylene film / polycarbonate backing, SI units.
MediumParams water_parylene_polycarbonate();

/// The same medium scaled with c_ref = 1500 m/s, rho_ref = 1000 kg/m^3.
MediumParams default_nondimensional_medium();

/// Speeds divided by `c_ref`, densities by `rho_ref` (the acoustic density when
/// not given), lengths by `L_ref`, curvatures multiplied by `L_ref`.
MediumParams nondimensionalize(const MediumParams& physical, double L_ref, double c_ref,
                               std::optional<double> rho_ref = std::nullopt);

/// The commonly assumed sensor that does not perturb the field:
/// film and backing share the acoustic speed and density.
MediumParams idealized_medium(const MediumParams& params);

struct SensorCoefficients {
    double a = 0.0;      ///< 2 H c_s^2 rho_s / (c_b rho_b)
    double b = 0.0;      ///< 2 H^2 c_s^2 rho_s / rho_b
    double cs2 = 0.0;    ///< c_s^2
    double alpha = 0.0;  ///< rho c / (rho_b c_b)
};

SensorCoefficients sensor_coefficients(const MediumParams& params);

}  // namespace pat
