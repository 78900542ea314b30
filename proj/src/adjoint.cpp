#include "pat/adjoint.hpp"

#include <algorithm>
#include <cmath>

namespace pat {

namespace {

void require_grid(const PatProblem& problem, const BoundaryTrace& psi) {
    if (psi.samples() != problem.samples() || psi.nodes() != problem.boundary->nodes()) {
        throw ConfigError("data grid (" + std::to_string(psi.samples()) + " x " +
                          std::to_string(psi.nodes()) + ") does not match the problem (" +
                          std::to_string(problem.samples()) + " x " +
                          std::to_string(problem.boundary->nodes()) + ")");
    }
}

}  // namespace

BoundaryTrace boundary_source(const BoundaryTrace& psi, const SensorCoefficients& coeffs,
                              double rho_b, const BoundaryOperators& ops, double scale) {
    if (psi.samples() == 0 || psi.nodes() == 0) {
        throw ConfigError("empty trace");
    }
    const Eigen::MatrixXd big_psi = antiderivative2(psi.values, psi.dt, TimeDirection::backward);
    BoundaryTrace phi;
    phi.dt = psi.dt;
    phi.values = (scale * rho_b) *
                 (psi.values - coeffs.a * time_derivative(big_psi, psi.dt) + coeffs.b * big_psi -
                  coeffs.cs2 * ops.laplace_beltrami(big_psi));
    return phi;
}

BoundaryTrace boundary_source_idealized(const BoundaryTrace& psi, double rho_b, double scale) {
    if (psi.samples() == 0 || psi.nodes() == 0) {
        throw ConfigError("empty trace");
    }
    BoundaryTrace phi;
    phi.dt = psi.dt;
    phi.values = (scale * rho_b) * psi.values;
    return phi;
}

InitialData adjoint_operator(const PatProblem& problem, const BoundaryTrace& psi) {
    require_grid(problem, psi);
    const double rho_b = problem.params.rho_b;
    const BoundaryTrace phi =
        problem.model == MeasurementModel::idealized
            ? boundary_source_idealized(psi, rho_b, problem.scale)
            : boundary_source(psi, problem.coeffs, rho_b, *problem.boundary, problem.scale);
    const AdjointSolution xi = problem.solver->solve_adjoint_ibvp(phi);
    return {problem.solver->project_h10(-xi.xi_dot0), -xi.xi0};
}

InitialData discrete_adjoint_operator(const PatProblem& problem, const BoundaryTrace& psi) {
    require_grid(problem, psi);
    const Eigen::VectorXd w = trapezoid_weights(psi.samples(), psi.dt);
    const Eigen::MatrixXd weighted = w.asDiagonal() * problem.boundary->apply_weights(psi.values);
    const Eigen::MatrixXd seeds =
        problem.model == MeasurementModel::idealized
            ? Eigen::MatrixXd(problem.scale * weighted)
            : measure_fabry_perot_transpose(weighted, psi.dt, problem.coeffs, *problem.boundary,
                                            problem.scale);
    const auto [g0, g1] = problem.solver->forward_transpose(seeds);
    return {problem.solver->solve_interior_mass(g0), problem.solver->solve_mass(g1)};
}

InitialData apply_adjoint(const PatProblem& problem, const BoundaryTrace& psi, AdjointKind kind) {
    return kind == AdjointKind::discrete ? discrete_adjoint_operator(problem, psi)
                                         : adjoint_operator(problem, psi);
}

double initial_inner(const PatProblem& problem, const InitialData& x, const InitialData& y) {
    return problem.solver->mass_inner(x.p0, y.p0) + problem.solver->mass_inner(x.p1, y.p1);
}

Field random_smooth_field(const Mesh& mesh, std::mt19937_64& rng, bool vanish_on_boundary) {
    constexpr int kDegree = 3;
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    std::vector<double> c;
    for (int i = 0; i <= kDegree; ++i) {
        for (int j = 0; i + j <= kDegree; ++j) {
            c.push_back(coef(rng));
        }
    }
    Field f(mesh.num_vertices());
    for (int v = 0; v < mesh.num_vertices(); ++v) {
        const Point& p = mesh.vertices()[v];
        double value = 0.0;
        std::size_t k = 0;
        for (int i = 0; i <= kDegree; ++i) {
            for (int j = 0; i + j <= kDegree; ++j) {
                value += c[k++] * std::pow(p.x(), i) * std::pow(p.y(), j);
            }
        }
        if (vanish_on_boundary) {
            value *= mesh.boundary_mask()[v] ? 0.0 : 1.0 - p.squaredNorm();
        }
        f[v] = value;
    }
    return f;
}

BoundaryTrace random_smooth_trace(const Mesh& mesh, int samples, double dt, std::mt19937_64& rng) {
    constexpr int kTimeModes = 4;
    constexpr int kAngleModes = 3;
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    Eigen::MatrixXd cos_coef(kTimeModes, kAngleModes);
    Eigen::MatrixXd sin_coef(kTimeModes, kAngleModes);
    for (int m = 0; m < kTimeModes; ++m) {
        for (int k = 0; k < kAngleModes; ++k) {
            cos_coef(m, k) = coef(rng);
            sin_coef(m, k) = coef(rng);
        }
    }
    const auto& loop = mesh.boundary_loop();
    const double T = (samples - 1) * dt;
    BoundaryTrace psi;
    psi.dt = dt;
    psi.values.resize(samples, static_cast<Eigen::Index>(loop.size()));
    for (std::size_t j = 0; j < loop.size(); ++j) {
        const Point& p = mesh.vertices()[loop[j]];
        const double theta = std::atan2(p.y(), p.x());
        for (int n = 0; n < samples; ++n) {
            const double t = n * dt;
            double value = 0.0;
            for (int m = 0; m < kTimeModes; ++m) {
                const double tm = std::cos(m * M_PI * t / T);
                for (int k = 0; k < kAngleModes; ++k) {
                    value += tm * (cos_coef(m, k) * std::cos(k * theta) +
                                   sin_coef(m, k) * std::sin(k * theta));
                }
            }
            psi.values(n, static_cast<Eigen::Index>(j)) = value;
        }
    }
    return psi;
}

DotProductSample dot_product_test(const PatProblem& problem, const InitialData& x,
                                  const BoundaryTrace& psi, AdjointKind kind) {
    const Measurement fx = forward_operator(problem, x.p0, x.p1);
    const InitialData fpsi = apply_adjoint(problem, psi, kind);
    DotProductSample s;
    s.forward_side = data_inner(fx.trace, psi, *problem.boundary);
    s.adjoint_side = initial_inner(problem, x, fpsi);
    const double denom = std::max(std::abs(s.forward_side), std::abs(s.adjoint_side));
    s.mismatch = denom > 0.0 ? std::abs(s.forward_side - s.adjoint_side) / denom : 0.0;
    return s;
}

std::vector<DotProductSample> dot_product_study(const PatProblem& problem, int pairs,
                                                std::uint64_t seed, AdjointKind kind) {
    if (pairs < 1) {
        throw ConfigError("dot-product study needs at least one pair");
    }
    std::mt19937_64 rng(seed);
    std::vector<DotProductSample> out;
    for (int i = 0; i < pairs; ++i) {
        InitialData x;
        x.p0 = random_smooth_field(problem.mesh, rng, true);
        x.p1 = random_smooth_field(problem.mesh, rng, false);
        const BoundaryTrace psi =
            random_smooth_trace(problem.mesh, problem.samples(), problem.dt(), rng);
        out.push_back(dot_product_test(problem, x, psi, kind));
    }
    return out;
}

}  // namespace pat
