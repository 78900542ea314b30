#pragma once

#include "pat/problem.hpp"

#include <cstdint>
#include <random>

namespace pat {

enum class AdjointKind {
    continuous,  ///< discretized continuous adjoint (backward boundary value problem)
    discrete,    ///< exact transpose of the discrete forward map
};

/// Boundary source of the backward problem:
///   Psi = J2_backward(psi),
///   phi = scale rho_b (psi - a dPsi/dt + b Psi - c_s^2 Lap Psi).
BoundaryTrace boundary_source(const BoundaryTrace& psi, const SensorCoefficients& coeffs,
                              double rho_b, const BoundaryOperators& ops, double scale = 1.0);

/// Source for the idealized sensor: scale rho_b psi.
BoundaryTrace boundary_source_idealized(const BoundaryTrace& psi, double rho_b,
                                        double scale = 1.0);

/// Continuous adjoint with respect to the c^-2 mass pairing of initial data
/// and the arc-length/trapezoid pairing of data. The p0 part is projected onto
/// fields vanishing on the boundary.
InitialData adjoint_operator(const PatProblem& problem, const BoundaryTrace& psi);

/// Exact transpose of forward_operator under the same pairings, evaluated by
/// a reverse sweep of the time stepper.
InitialData discrete_adjoint_operator(const PatProblem& problem, const BoundaryTrace& psi);

InitialData apply_adjoint(const PatProblem& problem, const BoundaryTrace& psi, AdjointKind kind);

/// <p0, q0>_M + <p1, q1>_M
double initial_inner(const PatProblem& problem, const InitialData& x, const InitialData& y);

/// Low-order random polynomial field. With `vanish_on_boundary` it carries the
/// factor (1 - r^2) and is exactly zero on boundary nodes.
Field random_smooth_field(const Mesh& mesh, std::mt19937_64& rng, bool vanish_on_boundary);

/// Low-order random trigonometric trace in time and boundary angle.
BoundaryTrace random_smooth_trace(const Mesh& mesh, int samples, double dt, std::mt19937_64& rng);

struct DotProductSample {
    double forward_side = 0.0;  ///< <F x, psi>
    double adjoint_side = 0.0;  ///< <x, F* psi>
    double mismatch = 0.0;      ///< |difference| / max(|forward_side|, |adjoint_side|)
};

DotProductSample dot_product_test(const PatProblem& problem, const InitialData& x,
                                  const BoundaryTrace& psi, AdjointKind kind);

/// `pairs` seeded random (x, psi) pairs; x has both components nonzero.
std::vector<DotProductSample> dot_product_study(const PatProblem& problem, int pairs,
                                                std::uint64_t seed, AdjointKind kind);

}  // namespace pat
