#pragma once

#include "pat/assembly.hpp"
#include "pat/medium.hpp"
#include "pat/mesh.hpp"
#include "pat/sensor.hpp"
#include "pat/wavesolver.hpp"

#include <memory>

namespace pat {

/// Initial data (p0, p1) of the forward problem; also the output of adjoints.
struct InitialData {
    Field p0;
    Field p1;
};

struct DiscretizationOptions {
    double T = 2.5;
    double cfl_safety = 0.2;
    /// When positive, replaces the CFL-derived step as the upper bound on dt.
    double dt_max = 0.0;
    MassType mass = MassType::consistent;
    int snapshot_every = 0;
};

/// Everything needed to apply the forward map and its adjoints on one mesh:
/// assembled matrices, factorized time stepper, boundary operators and the
/// sensor model. Immutable and cheap to copy.
struct PatProblem {
    Mesh mesh;
    /// Parameters the operators were built with. For the idealized model the
    /// sensor layers are replaced by the acoustic medium.
    MediumParams params;
    SensorCoefficients coeffs;
    MeasurementModel model = MeasurementModel::fabry_perot;
    double scale = 1.0;
    std::shared_ptr<const WaveSolver> solver;
    std::shared_ptr<const BoundaryOperators> boundary;

    double dt() const { return solver->config().dt; }
    int samples() const { return solver->config().samples(); }
    const SparseMatrix& mass() const { return solver->matrices().M; }
};

/// Throws ConfigError for invalid options and NumericalError when the chosen
/// step violates the stability bound.
PatProblem make_problem(Mesh mesh, const MediumParams& params, MeasurementModel model,
                        const DiscretizationOptions& options, double scale = 1.0);

/// (p0, p1) -> measurement under the problem's sensor model.
Measurement forward_operator(const PatProblem& problem, const Field& p0, const Field& p1);

}  // namespace pat
