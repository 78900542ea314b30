#pragma once

#include "pat/common.hpp"
#include "pat/medium.hpp"
#include "pat/mesh.hpp"
#include "pat/wavesolver.hpp"

#include <string>

namespace pat {

// Time series are matrices with one row per sample and one column per channel.

enum class TimeDirection { forward, backward };

/// Composite trapezoid weights: dt/2 at both ends, dt inside.
Eigen::VectorXd trapezoid_weights(int samples, double dt);

/// Forward: Q(t) = integral over (0, t) of (t - s) v(s) ds, the double
/// antiderivative with zero Cauchy data at 0, by the trapezoid rule on each
/// [0, t_n]. Exact for affine v; the second difference of Q returns v in the
/// interior. Backward: the mirror image with zero Cauchy data at T, which is
/// the adjoint of the forward operator under trapezoid weights.
/// Throws ConfigError for fewer than 2 samples.
Eigen::MatrixXd antiderivative2(const Eigen::MatrixXd& series, double dt, TimeDirection direction);

/// Plain matrix transpose of the forward antiderivative2 (no weights).
Eigen::MatrixXd antiderivative2_transpose(const Eigen::MatrixXd& series, double dt);

/// Summation-by-parts first derivative: central differences inside,
/// one-sided differences in the first and last rows.
Eigen::MatrixXd time_derivative(const Eigen::MatrixXd& series, double dt);
Eigen::MatrixXd time_derivative_transpose(const Eigen::MatrixXd& series, double dt);

/// P1 operators of the closed boundary curve in boundary-loop order: lumped
/// arc-length weights (the row sums of the consistent mass) and the periodic
/// stiffness.
class BoundaryOperators {
public:
    explicit BoundaryOperators(const Mesh& mesh);

    const Eigen::VectorXd& weights() const { return weights_; }
    const SparseMatrix& stiffness() const { return S_; }
    int nodes() const { return static_cast<int>(weights_.size()); }

    /// Weak Laplace-Beltrami operator -W^-1 S on every row, W = diag(weights).
    Eigen::MatrixXd laplace_beltrami(const Eigen::MatrixXd& rows) const;
    /// S W^-1 on every row; the transpose of -laplace_beltrami.
    Eigen::MatrixXd stiffness_inverse_mass(const Eigen::MatrixXd& rows) const;
    /// Scales column j by weights[j].
    Eigen::MatrixXd apply_weights(const Eigen::MatrixXd& rows) const;

private:
    Eigen::VectorXd weights_;
    SparseMatrix S_;
};

enum class MeasurementModel { fabry_perot, idealized };

std::string to_string(MeasurementModel model);
/// Accepts "fabry_perot" / "fabry-perot" and "idealized"; throws ConfigError.
MeasurementModel parse_measurement_model(const std::string& name);

struct Measurement {
    BoundaryTrace trace;
    MeasurementModel model = MeasurementModel::fabry_perot;
};

/// m = scale * (p + J2(a dp/dt + b p - c_s^2 Lap p)) with J2 the forward
/// antiderivative2. Throws ConfigError if the first row of `p` is nonzero.
Measurement measure_fabry_perot(const BoundaryTrace& p, const SensorCoefficients& coeffs,
                                const BoundaryOperators& ops, double scale = 1.0);

/// m = scale * p.
Measurement measure_idealized(const BoundaryTrace& p, double scale = 1.0);

/// Exact transpose of measure_fabry_perot for Euclidean (unweighted) pairing
/// of time series. Built from the transposes of each factor.
Eigen::MatrixXd measure_fabry_perot_transpose(const Eigen::MatrixXd& y, double dt,
                                              const SensorCoefficients& coeffs,
                                              const BoundaryOperators& ops, double scale = 1.0);

/// Space-time data pairing: trapezoid weights in time, arc-length weights on
/// the boundary.
double data_inner(const BoundaryTrace& u, const BoundaryTrace& v, const BoundaryOperators& ops);

/// Samples a trace computed on a refinement of `coarse` at the coarse
/// boundary nodes (matched by coordinates) and every `time_stride`-th sample.
BoundaryTrace restrict_trace(const BoundaryTrace& fine, const Mesh& fine_mesh, const Mesh& coarse,
                             int time_stride);

}  // namespace pat
