#include "pat/assembly.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <tuple>

namespace pat {

namespace {

constexpr double kDegenerateArea = 1e-14;

// Element contribution tagged with a canonical element key so the global sum
// is formed in a fixed order regardless of element enumeration order.
struct Contribution {
    int row;
    int col;
    std::array<int, 3> key;
    double value;
};

SparseMatrix sum_sorted(int n, std::vector<Contribution>& entries) {
    std::sort(entries.begin(), entries.end(), [](const Contribution& a, const Contribution& b) {
        return std::tie(a.row, a.col, a.key) < std::tie(b.row, b.col, b.key);
    });
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(entries.size());
    for (std::size_t i = 0; i < entries.size();) {
        double sum = 0.0;
        std::size_t j = i;
        for (; j < entries.size() && entries[j].row == entries[i].row &&
               entries[j].col == entries[i].col;
             ++j) {
            sum += entries[j].value;
        }
        triplets.emplace_back(entries[i].row, entries[i].col, sum);
        i = j;
    }
    SparseMatrix m(n, n);
    m.setFromTriplets(triplets.begin(), triplets.end());
    m.makeCompressed();
    return m;
}

std::array<int, 3> sorted_key(const Triangle& t) {
    std::array<int, 3> k = t;
    std::sort(k.begin(), k.end());
    return k;
}

struct ElementMatrices {
    Eigen::Matrix3d mass;
    Eigen::Matrix3d stiffness;
    double area;
};

// Rotation starting at the smallest index; element arithmetic then does not
// depend on where the triangle's vertex list starts.
Triangle canonical(const Triangle& t) {
    Triangle r = t;
    std::rotate(r.begin(), std::min_element(r.begin(), r.end()), r.end());
    return r;
}

ElementMatrices element(const Mesh& mesh, int t, const MediumParams& params, MassType mass) {
    const Triangle tri = canonical(mesh.triangles()[t]);
    const Point& p0 = mesh.vertices()[tri[0]];
    const Point& p1 = mesh.vertices()[tri[1]];
    const Point& p2 = mesh.vertices()[tri[2]];
    const Point e1 = p1 - p0;
    const Point e2 = p2 - p0;
    const double area = 0.5 * (e1.x() * e2.y() - e1.y() * e2.x());
    if (!(area >= kDegenerateArea)) {
        throw NumericalError("degenerate triangle " + std::to_string(t) + " (area " +
                             std::to_string(area) + ")");
    }
    // gradients of the barycentric basis, scaled by 2*area
    const Eigen::Vector3d gx(p1.y() - p2.y(), p2.y() - p0.y(), p0.y() - p1.y());
    const Eigen::Vector3d gy(p2.x() - p1.x(), p0.x() - p2.x(), p1.x() - p0.x());

    ElementMatrices e;
    e.area = area;
    e.stiffness = (gx * gx.transpose() + gy * gy.transpose()) / (4.0 * area);

    double inv_c2 = 0.0;
    for (int k = 0; k < 3; ++k) {
        const double c = params.speed_at(tri[k]);
        inv_c2 += 1.0 / (c * c);
    }
    inv_c2 /= 3.0;
    if (mass == MassType::consistent) {
        e.mass = (Eigen::Matrix3d::Ones() + Eigen::Matrix3d::Identity()) * (area / 12.0) * inv_c2;
    } else {
        e.mass = Eigen::Matrix3d::Identity() * (area / 3.0) * inv_c2;
    }
    return e;
}

}  // namespace

InteriorMatrices assemble_interior(const Mesh& mesh, const MediumParams& params, MassType mass) {
    params.validate(mesh.num_vertices());
    std::vector<Contribution> m_entries;
    std::vector<Contribution> a_entries;
    m_entries.reserve(9 * mesh.triangles().size());
    a_entries.reserve(9 * mesh.triangles().size());
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        const Triangle tri = canonical(mesh.triangles()[t]);
        const auto key = sorted_key(tri);
        const ElementMatrices e = element(mesh, t, params, mass);
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                if (e.mass(i, j) != 0.0) {
                    m_entries.push_back({tri[i], tri[j], key, e.mass(i, j)});
                }
                a_entries.push_back({tri[i], tri[j], key, e.stiffness(i, j)});
            }
        }
    }
    const int n = mesh.num_vertices();
    return {sum_sorted(n, m_entries), sum_sorted(n, a_entries)};
}

BoundaryMatrices assemble_boundary(const Mesh& mesh, const BoundaryGeometry& geom,
                                   const MediumParams& params) {
    params.validate(mesh.num_vertices());
    const auto& loop = mesh.boundary_loop();
    const int nb = mesh.num_boundary_nodes();
    if (nb < 3 || static_cast<int>(geom.node_weight.size()) != nb) {
        throw ConfigError("boundary loop is open or does not match the boundary geometry");
    }
    std::vector<Contribution> b_entries;
    std::vector<Contribution> s_entries;
    for (int i = 0; i < nb; ++i) {
        const int u = loop[i];
        const int w = loop[(i + 1) % nb];
        const double len = mesh.boundary_edge_lengths()[i];
        const std::array<int, 3> key{std::min(u, w), std::max(u, w), -1};
        const int ids[2] = {u, w};
        for (int a = 0; a < 2; ++a) {
            for (int b = 0; b < 2; ++b) {
                b_entries.push_back({ids[a], ids[b], key, len * (a == b ? 2.0 : 1.0) / 6.0});
                s_entries.push_back({ids[a], ids[b], key, (a == b ? 1.0 : -1.0) / len});
            }
        }
    }
    const int n = mesh.num_vertices();
    BoundaryMatrices out;
    out.B_gamma = sum_sorted(n, b_entries);
    out.S_gamma = sum_sorted(n, s_entries);
    out.C = out.B_gamma * (params.rho / (params.rho_b * params.c_b));
    out.G = out.B_gamma * (params.rho * params.H / params.rho_b);
    return out;
}

SystemMatrices assemble_system(const Mesh& mesh, const MediumParams& params, MassType mass) {
    auto interior = assemble_interior(mesh, params, mass);
    auto boundary = assemble_boundary(mesh, boundary_geometry(mesh), params);
    return {std::move(interior.M), std::move(interior.A), std::move(boundary.B_gamma),
            std::move(boundary.S_gamma), std::move(boundary.C), std::move(boundary.G)};
}

double cfl_dt(const Mesh& mesh, const MediumParams& params, double safety) {
    if (!(safety > 0.0 && safety <= 1.0)) {
        throw ConfigError("cfl safety must lie in (0, 1]");
    }
    double h_min = std::numeric_limits<double>::infinity();
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        const auto& tri = mesh.triangles()[t];
        double longest = 0.0;
        for (int k = 0; k < 3; ++k) {
            longest = std::max(
                longest, (mesh.vertices()[tri[(k + 1) % 3]] - mesh.vertices()[tri[k]]).norm());
        }
        h_min = std::min(h_min, 2.0 * mesh.signed_area(t) / longest);
    }
    return safety * h_min / params.max_speed();
}

double stable_dt_bound(const Mesh& mesh, const MediumParams& params, MassType mass) {
    params.validate(mesh.num_vertices());
    // attach each boundary edge's curvature term to the triangle that owns it
    const auto& loop = mesh.boundary_loop();
    const int nb = mesh.num_boundary_nodes();
    const double g_coef = params.rho * params.H / params.rho_b;

    double lambda_max = 0.0;
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        const auto& tri = mesh.triangles()[t];
        ElementMatrices e = element(mesh, t, params, mass);
        Eigen::Matrix3d k = e.stiffness;
        if (g_coef > 0.0) {
            for (int i = 0; i < 3; ++i) {
                const int u = tri[i];
                const int w = tri[(i + 1) % 3];
                if (!mesh.boundary_mask()[u] || !mesh.boundary_mask()[w]) {
                    continue;
                }
                // boundary edges are traversed u -> w by the owning triangle
                const auto pos = std::find(loop.begin(), loop.end(), u) - loop.begin();
                if (loop[(pos + 1) % nb] != w) {
                    continue;
                }
                const double len = mesh.boundary_edge_lengths()[pos];
                const int j = (i + 1) % 3;
                k(i, i) += g_coef * len / 3.0;
                k(j, j) += g_coef * len / 3.0;
                k(i, j) += g_coef * len / 6.0;
                k(j, i) += g_coef * len / 6.0;
            }
        }
        Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::Matrix3d> solver(k, e.mass,
                                                                         Eigen::EigenvaluesOnly);
        lambda_max = std::max(lambda_max, solver.eigenvalues().maxCoeff());
    }
    if (!(lambda_max > 0.0)) {
        return std::numeric_limits<double>::infinity();
    }
    return 2.0 / std::sqrt(lambda_max);
}

}  // namespace pat
