#pragma once

#include "pat/common.hpp"
#include "pat/medium.hpp"
#include "pat/mesh.hpp"

namespace pat {

enum class MassType { consistent, lumped };

/// P1 operators of the interior wave equation and its boundary condition,
/// all in global vertex numbering.
///
/// With these, the semi-discrete forward problem reads
///   M p'' + C p' + (A + G) p = 0.
struct SystemMatrices {
    SparseMatrix M;        ///< c^-2 weighted mass
    SparseMatrix A;        ///< stiffness, integral of grad p . grad q
    SparseMatrix B_gamma;  ///< consistent boundary mass
    SparseMatrix S_gamma;  ///< boundary stiffness (periodic 1D P1 Laplace-Beltrami)
    SparseMatrix C;        ///< rho / (rho_b c_b) * B_gamma
    SparseMatrix G;        ///< rho H / rho_b * B_gamma
};

struct InteriorMatrices {
    SparseMatrix M;
    SparseMatrix A;
};

struct BoundaryMatrices {
    SparseMatrix B_gamma;
    SparseMatrix S_gamma;
    SparseMatrix C;
    SparseMatrix G;
};

/// Exact P1 element integrals. c^-2 is averaged over the three vertices of
/// each triangle. Throws NumericalError on a triangle with area < 1e-14.
InteriorMatrices assemble_interior(const Mesh& mesh, const MediumParams& params,
                                   MassType mass = MassType::consistent);

BoundaryMatrices assemble_boundary(const Mesh& mesh, const BoundaryGeometry& geom,
                                   const MediumParams& params);

SystemMatrices assemble_system(const Mesh& mesh, const MediumParams& params,
                               MassType mass = MassType::consistent);

/// safety * min over triangles of (2 area / longest edge) / max speed.
double cfl_dt(const Mesh& mesh, const MediumParams& params, double safety);

/// Largest step for which the explicit central-difference scheme is provably
/// stable: 2 / sqrt(max element eigenvalue of (A_e + G_e, M_e)).
double stable_dt_bound(const Mesh& mesh, const MediumParams& params,
                       MassType mass = MassType::consistent);

}  // namespace pat
