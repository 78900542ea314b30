#pragma once

#include "pat/common.hpp"

#include <array>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

namespace pat {

using Point = Eigen::Vector2d;
using Triangle = std::array<int, 3>;

/// Triangulation of a planar domain with its boundary traced as one closed,
/// counterclockwise loop. Immutable once built; every constructor path
/// validates the topology.
class Mesh {
public:
    /// Validates and builds. Throws ConfigError describing the first defect.
    static Mesh create(std::vector<Point> vertices, std::vector<Triangle> triangles,
                       std::vector<int> boundary_loop,
                       std::optional<double> exact_boundary_curvature = std::nullopt);

    const std::vector<Point>& vertices() const { return vertices_; }
    const std::vector<Triangle>& triangles() const { return triangles_; }
    /// Boundary vertex indices in counterclockwise order; the edge from the last
    /// entry back to the first closes the loop.
    const std::vector<int>& boundary_loop() const { return boundary_loop_; }
    /// Length of edge loop[i] -> loop[(i + 1) % B].
    const std::vector<double>& boundary_edge_lengths() const { return boundary_edge_lengths_; }
    /// Set for generated meshes whose boundary lies on a known circle.
    std::optional<double> exact_boundary_curvature() const { return exact_curvature_; }

    int num_vertices() const { return static_cast<int>(vertices_.size()); }
    int num_triangles() const { return static_cast<int>(triangles_.size()); }
    int num_boundary_nodes() const { return static_cast<int>(boundary_loop_.size()); }

    double signed_area(int t) const;
    double total_area() const;
    /// true for vertices on the boundary loop.
    const std::vector<bool>& boundary_mask() const { return boundary_mask_; }
    /// Vertices not on the boundary, ascending.
    const std::vector<int>& interior_vertices() const { return interior_; }

    /// Geometry and topology equality (ignores the curvature annotation).
    bool operator==(const Mesh& other) const;

private:
    Mesh() = default;

    std::vector<Point> vertices_;
    std::vector<Triangle> triangles_;
    std::vector<int> boundary_loop_;
    std::vector<double> boundary_edge_lengths_;
    std::optional<double> exact_curvature_;
    std::vector<bool> boundary_mask_;
    std::vector<int> interior_;
};

inline constexpr int kMaxRefinementLevel = 8;

/// Unit disk: hexagon fan around the origin, uniformly refined `level` times
/// by midpoint subdivision with boundary midpoints projected onto the circle.
Mesh generate_disk_mesh(int refinement_level);

/// One uniform midpoint refinement. Existing vertices keep their indices;
/// boundary midpoints are pushed radially to `project_radius` when given.
Mesh refine(const Mesh& mesh, std::optional<double> project_radius);

struct BoundaryGeometry {
    std::vector<double> node_curvature;  ///< signed, positive for convex boundaries
    std::vector<double> node_weight;     ///< lumped arc length per loop node
    double total_length = 0.0;
};

BoundaryGeometry boundary_geometry(const Mesh& mesh);

// "patmesh 1" text format.
void write_mesh(std::ostream& out, const Mesh& mesh);
Mesh read_mesh(std::istream& in);
void save_mesh(const Mesh& mesh, const std::filesystem::path& path);
Mesh load_mesh(const std::filesystem::path& path);

}  // namespace pat
