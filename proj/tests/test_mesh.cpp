#include "pat/mesh.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace pat;

namespace {

double cross2(const Point& a, const Point& b) { return a.x() * b.y() - a.y() * b.x(); }

std::string mesh_text(const Mesh& m) {
    std::ostringstream s;
    write_mesh(s, m);
    return s.str();
}

}  // namespace

TEST_CASE("level 0 is the hexagon fan and satisfies the invariants") {
    const Mesh m = generate_disk_mesh(0);
    CHECK(m.num_vertices() == 7);
    CHECK(m.num_triangles() == 6);
    CHECK(m.num_boundary_nodes() == 6);
    for (int t = 0; t < m.num_triangles(); ++t) {
        CHECK(m.signed_area(t) > 0.0);
    }
    for (int v : m.boundary_loop()) {
        CHECK(std::abs(m.vertices()[v].norm() - 1.0) < 1e-9);
    }
}

TEST_CASE("each level quadruples the triangle count") {
    const int base = generate_disk_mesh(0).num_triangles();
    for (int k = 1; k <= 5; ++k) {
        const Mesh m = generate_disk_mesh(k);
        int counted = 0;
        for (const auto& tri : m.triangles()) {
            counted += tri[0] != tri[1] && tri[1] != tri[2] ? 1 : 0;
        }
        CHECK(counted == base * (1 << (2 * k)));
        const int n = 1 << k;
        CHECK(m.num_vertices() == 3 * n * (n + 1) + 1);
        CHECK(m.num_boundary_nodes() == 6 * n);
    }
}

TEST_CASE("mesh area matches the inscribed polygon and approaches pi") {
    for (int k = 0; k <= 4; ++k) {
        const Mesh m = generate_disk_mesh(k);
        const int n = m.num_boundary_nodes();
        const double polygon = 0.5 * n * std::sin(2.0 * M_PI / n);
        CHECK(m.total_area() == doctest::Approx(polygon).epsilon(1e-12));
        if (k == 3) {
            CHECK(M_PI - m.total_area() < 1e-2);
        }
    }
}

TEST_CASE("level out of range") {
    CHECK_THROWS_AS(generate_disk_mesh(kMaxRefinementLevel + 1), ConfigError);
    CHECK_THROWS_AS(generate_disk_mesh(-1), ConfigError);
}

TEST_CASE("boundary geometry of a regular polygon") {
    for (int n : {3, 5, 12}) {
        const Mesh m = test::polygon_fan(n);
        const BoundaryGeometry g = boundary_geometry(m);
        for (double w : g.node_weight) {
            CHECK(w == doctest::Approx(2.0 * std::sin(M_PI / n)).epsilon(1e-13));
        }
    }
}

TEST_CASE("boundary geometry of generated disks") {
    const Mesh m = generate_disk_mesh(3);
    const BoundaryGeometry g = boundary_geometry(m);
    for (double k : g.node_curvature) {
        CHECK(k == 1.0);
    }
    CHECK(std::abs(g.total_length - 2.0 * M_PI) < 0.01 * 2.0 * M_PI);
    double sum = 0.0;
    for (double w : g.node_weight) {
        CHECK(w > 0.0);
        sum += w;
    }
    CHECK(sum == doctest::Approx(g.total_length).epsilon(1e-12));
}

TEST_CASE("loaded meshes estimate curvature from three boundary nodes") {
    std::istringstream in(mesh_text(test::polygon_fan(40)));
    const Mesh m = read_mesh(in);
    CHECK_FALSE(m.exact_boundary_curvature().has_value());
    // circumscribed circle of three consecutive vertices is the unit circle
    for (double k : boundary_geometry(m).node_curvature) {
        CHECK(k == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("mesh text round trip is bitwise") {
    const Mesh m = generate_disk_mesh(1);
    const std::string first = mesh_text(m);
    std::istringstream in(first);
    const Mesh back = read_mesh(in);
    CHECK(back == m);
    for (int v = 0; v < m.num_vertices(); ++v) {
        CHECK(back.vertices()[v].x() == m.vertices()[v].x());
        CHECK(back.vertices()[v].y() == m.vertices()[v].y());
    }
    CHECK(mesh_text(back) == first);
}

TEST_CASE("mesh loader reports the offending line") {
    const std::string bad_index =
        "patmesh 1\nvertices 3\n0 0\n1 0\n0 1\ntriangles 1\n0 1 3\nboundary 3\n0\n1\n2\n";
    std::istringstream a(bad_index);
    try {
        read_mesh(a);
        FAIL("expected an error");
    } catch (const IoError& e) {
        CHECK(std::string(e.what()).find("line 7") != std::string::npos);
    }

    // loop 0 1 2 3 on a square split into two triangles; the closing edge 3 -> 0 exists,
    // so drop vertex 3 from the loop to leave the loop open
    const std::string open_loop =
        "patmesh 1\nvertices 4\n0 0\n1 0\n1 1\n0 1\ntriangles 2\n0 1 2\n0 2 3\n"
        "boundary 3\n0\n1\n2\n";
    std::istringstream b(open_loop);
    try {
        read_mesh(b);
        FAIL("expected an error");
    } catch (const IoError& e) {
        CHECK(std::string(e.what()).find("boundary loop not closed") != std::string::npos);
        CHECK(std::string(e.what()).find("line ") != std::string::npos);
    }

    std::istringstream c("patmesh 2\n");
    CHECK_THROWS_AS(read_mesh(c), IoError);
}

TEST_CASE("refinement keeps orientation and lengthens the boundary towards 2 pi") {
    Mesh m = generate_disk_mesh(0);
    double previous = boundary_geometry(m).total_length;
    for (int k = 1; k <= 5; ++k) {
        m = refine(m, 1.0);
        for (int t = 0; t < m.num_triangles(); ++t) {
            REQUIRE(m.signed_area(t) > 0.0);
        }
        const double length = boundary_geometry(m).total_length;
        CHECK(length >= previous);
        CHECK(length < 2.0 * M_PI);
        previous = length;
    }
    CHECK(2.0 * M_PI - previous < 1e-3);
}

TEST_CASE("boundary edges run counterclockwise") {
    const Mesh m = generate_disk_mesh(2);
    const auto& loop = m.boundary_loop();
    const int nb = m.num_boundary_nodes();
    for (int i = 0; i < nb; ++i) {
        const Point& a = m.vertices()[loop[i]];
        const Point& b = m.vertices()[loop[(i + 1) % nb]];
        const Point inward = -(a + b) / 2.0;
        CHECK(cross2(b - a, inward) > 0.0);
    }
}

TEST_CASE("refine agrees with generation") {
    CHECK(refine(generate_disk_mesh(2), 1.0) == generate_disk_mesh(3));
}
