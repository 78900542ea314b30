#include "pat/inversion.hpp"

#include "pat/phantoms.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>

namespace pat {

namespace {

BoundaryTrace residual_trace(const Measurement& fx, const Measurement& m) {
    BoundaryTrace r;
    r.dt = m.trace.dt;
    r.values = fx.trace.values - m.trace.values;
    return r;
}

}  // namespace

NormEstimate estimate_norm(const PatProblem& problem, int iterations, std::uint64_t seed,
                           AdjointKind kind) {
    if (iterations < 1) {
        throw ConfigError("norm estimation needs at least one iteration");
    }
    std::mt19937_64 rng(seed);
    const Field zero = Field::Zero(problem.mesh.num_vertices());
    Field x = random_smooth_field(problem.mesh, rng, true);
    while (problem.solver->mass_inner(x, x) == 0.0) {
        x = random_smooth_field(problem.mesh, rng, true);
    }

    NormEstimate out;
    for (int k = 0; k < iterations; ++k) {
        x /= std::sqrt(problem.solver->mass_inner(x, x));
        const Measurement fx = forward_operator(problem, x, zero);
        out.value = data_inner(fx.trace, fx.trace, *problem.boundary);
        if (!std::isfinite(out.value)) {
            throw NumericalError("norm estimate turned non-finite at iteration " +
                                 std::to_string(k));
        }
        out.history.push_back(out.value);
        x = apply_adjoint(problem, fx.trace, kind).p0;
        if (problem.solver->mass_inner(x, x) == 0.0) {
            break;
        }
    }
    return out;
}

ReconReport landweber(const PatProblem& problem, const Measurement& m,
                      const LandweberOptions& options, const Field* ground_truth) {
    if (options.iterations < 1) {
        throw ConfigError("Landweber needs at least one iteration");
    }
    if (m.trace.samples() != problem.samples() || m.trace.nodes() != problem.boundary->nodes() ||
        std::abs(m.trace.dt - problem.dt()) > 1e-12 * problem.dt()) {
        throw ConfigError("measurement grid does not match the reconstruction problem");
    }
    const int n = problem.mesh.num_vertices();
    if (ground_truth && ground_truth->size() != n) {
        throw ConfigError("ground truth size does not match the mesh");
    }

    ReconReport report;
    report.norm_estimate =
        options.norm_estimate
            ? *options.norm_estimate
            : estimate_norm(problem, options.norm_iterations, options.seed, options.adjoint).value;
    if (!(report.norm_estimate > 0.0)) {
        throw NumericalError("operator norm estimate is not positive");
    }
    report.gamma = options.gamma != 0.0 ? options.gamma : 0.9 / report.norm_estimate;
    if (!(report.gamma > 0.0) || report.gamma >= 1.0 / report.norm_estimate) {
        throw ConfigError("gamma = " + std::to_string(report.gamma) + " must lie in (0, " +
                          std::to_string(1.0 / report.norm_estimate) + ")");
    }

    const Field zero = Field::Zero(n);
    Field phi = zero;
    auto record = [&](const Field& current, const BoundaryTrace& residual) {
        report.residual_history.push_back(
            std::sqrt(std::max(0.0, data_inner(residual, residual, *problem.boundary))));
        if (ground_truth) {
            report.error_history.push_back(relative_error(current, *ground_truth, problem.mass()));
        }
    };

    BoundaryTrace residual = residual_trace(forward_operator(problem, phi, zero), m);
    record(phi, residual);
    int k = 0;
    while (k < options.iterations) {
        if (!residual.values.allFinite()) {
            throw NumericalError("Landweber iteration " + std::to_string(k) +
                                 ": residual is not finite");
        }
        try {
            phi -= report.gamma * apply_adjoint(problem, residual, options.adjoint).p0;
            ++k;
            if (!phi.allFinite()) {
                throw NumericalError("iterate is not finite");
            }
            residual = residual_trace(forward_operator(problem, phi, zero), m);
        } catch (const NumericalError& e) {
            throw NumericalError("Landweber iteration " + std::to_string(k) + ": " + e.what());
        }
        record(phi, residual);
        if (options.keep_every > 0 && k % options.keep_every == 0) {
            report.iterates_kept.emplace_back(k, phi);
        }
        const auto& h = report.residual_history;
        if (options.stop_on_stagnation && k >= 5 && h[k - 5] - h[k] < 1e-4 * h[k - 5]) {
            report.stagnated = true;
            break;
        }
    }
    report.iterations = k;
    if (report.iterates_kept.empty() || report.iterates_kept.back().first != k) {
        report.iterates_kept.emplace_back(k, phi);
    }
    report.result = std::move(phi);
    return report;
}

Measurement synthesize_data(const PatProblem& coarse, const Mesh& fine, const MediumParams& params,
                            const Field& p0_fine, MeasurementModel model) {
    DiscretizationOptions o;
    o.T = coarse.solver->config().T;
    // slack so that rounding cannot add a step
    o.dt_max = 0.5 * coarse.dt() * (1.0 + 1e-9);
    const PatProblem fp = make_problem(fine, params, model, o, coarse.scale);
    if (fp.samples() - 1 != 2 * (coarse.samples() - 1)) {
        throw NumericalError("fine time grid does not halve the coarse one");
    }
    const Measurement m = forward_operator(fp, p0_fine, Field::Zero(fine.num_vertices()));
    return {restrict_trace(m.trace, fine, coarse.mesh, 2), model};
}

double relative_error(const Field& phi, const Field& p0, const SparseMatrix& M) {
    if (phi.size() != p0.size() || p0.size() != M.rows()) {
        throw ConfigError("relative error of fields with mismatched sizes");
    }
    const double ref = p0.dot(M * p0);
    if (!(ref > 0.0)) {
        throw ConfigError("reference field has zero norm");
    }
    const Field d = phi - p0;
    return std::sqrt(std::max(0.0, d.dot(M * d)) / ref);
}

void write_report(const ReconReport& report, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw IoError("cannot create " + dir.string() + ": " + ec.message());
    }
    {
        std::ofstream out(dir / "report.txt");
        out << std::setprecision(17);
        out << "iterations = " << report.iterations << '\n';
        out << "gamma = " << report.gamma << '\n';
        out << "norm_estimate = " << report.norm_estimate << '\n';
        out << "stagnated = " << (report.stagnated ? "true" : "false") << '\n';
        out << "final_residual = " << report.residual_history.back() << '\n';
        if (!report.error_history.empty()) {
            out << "final_relative_error = " << report.error_history.back() << '\n';
        }
        if (!out) {
            throw IoError("write to " + (dir / "report.txt").string() + " failed");
        }
    }
    {
        std::ofstream out(dir / "residuals.csv");
        out << std::setprecision(17) << "k,residual,error\n";
        for (std::size_t k = 0; k < report.residual_history.size(); ++k) {
            out << k << ',' << report.residual_history[k] << ',';
            if (k < report.error_history.size()) {
                out << report.error_history[k];
            }
            out << '\n';
        }
        if (!out) {
            throw IoError("write to " + (dir / "residuals.csv").string() + " failed");
        }
    }
    for (const auto& [k, field] : report.iterates_kept) {
        save_field(field, dir / ("iterate_" + std::to_string(k) + ".field"));
    }
}

}  // namespace pat
