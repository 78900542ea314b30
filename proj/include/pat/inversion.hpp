#pragma once

#include "pat/adjoint.hpp"
#include "pat/problem.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <utility>
#include <vector>

namespace pat {

struct NormEstimate {
    double value = 0.0;            ///< final Rayleigh quotient, estimate of ||F||^2
    std::vector<double> history;  ///< quotient after each power iteration
};

/// Power iteration on F*F restricted to initial pressures (p1 = 0), started
/// from a seeded smooth random field.
NormEstimate estimate_norm(const PatProblem& problem, int iterations, std::uint64_t seed,
                           AdjointKind kind = AdjointKind::continuous);

struct LandweberOptions {
    int iterations = 60;
    /// Step size; 0 selects 0.9 / estimate. Must stay below 1 / estimate.
    double gamma = 0.0;
    /// Precomputed ||F||^2; estimated with `norm_iterations` power steps if unset.
    std::optional<double> norm_estimate;
    int norm_iterations = 20;
    std::uint64_t seed = 1;
    AdjointKind adjoint = AdjointKind::continuous;
    /// Stop once the residual drops by less than 1e-4 (relative) over 5 iterations.
    bool stop_on_stagnation = false;
    /// Keep every k-th iterate in the report; 0 keeps only the last.
    int keep_every = 0;
};

struct ReconReport {
    std::vector<std::pair<int, Field>> iterates_kept;
    std::vector<double> residual_history;  ///< ||F phi_k - m||, k = 0..K
    std::vector<double> error_history;     ///< relative error, empty without ground truth
    double gamma = 0.0;
    double norm_estimate = 0.0;
    int iterations = 0;
    bool stagnated = false;
    Field result;
};

/// phi_{k+1} = phi_k - gamma F*(F phi_k - m) on the initial pressure, with
/// p1 pinned to 0 and phi_0 = 0. Throws ConfigError for a bad gamma or grid
/// and NumericalError naming the iteration when an iterate turns non-finite.
ReconReport landweber(const PatProblem& problem, const Measurement& m,
                      const LandweberOptions& options, const Field* ground_truth = nullptr);

/// Data for `coarse` from a forward solve on `fine` (a refinement of the coarse
/// mesh) with half the coarse time step, sampled back at the coarse boundary
/// nodes and time grid. `params` are the physical parameters; the idealized
/// substitution happens inside make_problem when `model` asks for it.
Measurement synthesize_data(const PatProblem& coarse, const Mesh& fine, const MediumParams& params,
                            const Field& p0_fine,
                            MeasurementModel model = MeasurementModel::fabry_perot);

/// ||phi - p0||_M / ||p0||_M. Throws ConfigError when ||p0||_M = 0.
double relative_error(const Field& phi, const Field& p0, const SparseMatrix& M);

/// report.txt (key=value), residuals.csv (k,residual,error) and one
/// `iterate_<k>.field` per kept iterate.
void write_report(const ReconReport& report, const std::filesystem::path& dir);

}  // namespace pat
