#include "pat/problem.hpp"

#include <cmath>

namespace pat {

PatProblem make_problem(Mesh mesh, const MediumParams& params, MeasurementModel model,
                        const DiscretizationOptions& options, double scale) {
    if (!(scale > 0.0) || !std::isfinite(scale)) {
        throw ConfigError("measurement scale must be positive");
    }
    if (options.dt_max < 0.0) {
        throw ConfigError("dt_max must be nonnegative");
    }
    PatProblem problem{std::move(mesh), {}, {}, model, scale, nullptr, nullptr};
    problem.params = model == MeasurementModel::idealized ? idealized_medium(params) : params;
    problem.params.validate(problem.mesh.num_vertices());
    problem.coeffs = sensor_coefficients(problem.params);

    const double dt_max = options.dt_max > 0.0
                              ? options.dt_max
                              : cfl_dt(problem.mesh, problem.params, options.cfl_safety);
    WaveRunConfig cfg = make_run_config(options.T, dt_max);
    cfg.snapshot_every = options.snapshot_every;
    const double bound = stable_dt_bound(problem.mesh, problem.params, options.mass);
    problem.solver = std::make_shared<WaveSolver>(
        assemble_system(problem.mesh, problem.params, options.mass),
        problem.mesh.boundary_loop(), problem.params.rho_b, cfg, bound);
    problem.boundary = std::make_shared<BoundaryOperators>(problem.mesh);
    return problem;
}

Measurement forward_operator(const PatProblem& problem, const Field& p0, const Field& p1) {
    const ForwardSolution sol = problem.solver->solve_forward(p0, p1);
    if (problem.model == MeasurementModel::idealized) {
        return measure_idealized(sol.trace, problem.scale);
    }
    return measure_fabry_perot(sol.trace, problem.coeffs, *problem.boundary, problem.scale);
}

}  // namespace pat
