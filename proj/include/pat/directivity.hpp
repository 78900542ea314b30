#pragma once

#include "pat/medium.hpp"

#include <optional>
#include <vector>

namespace pat {

// Angles are in degrees, measured from the boundary normal.

/// Plane-wave reflection coefficient (cos t - alpha) / (cos t + alpha).
/// Throws ConfigError unless alpha > 0 and theta lies in [0, 90].
double reflection_coefficient(double theta_deg, double alpha);

/// Measured over incident amplitude: (1 + R)(1 - (c_s / c)^2 sin^2 t).
double directivity(double theta_deg, const MediumParams& params);

/// arcsin(c / c_s) when the film is faster than the acoustic medium.
std::optional<double> critical_angle(const MediumParams& params);

/// Sign change of directivity in (0, 90) located by bisection to `tol` degrees.
std::optional<double> directivity_zero(const MediumParams& params, double tol = 1e-12);

struct DirectivitySample {
    double theta_deg;
    double R;
    double D;
};

/// Samples 0, step, 2 step, ... and always ends exactly at 90.
std::vector<DirectivitySample> directivity_curve(const MediumParams& params, double step_deg = 0.1);

}  // namespace pat
