#include "pat/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <utility>

namespace pat {

namespace {

using Edge = std::pair<int, int>;

Edge undirected(int a, int b) { return a < b ? Edge{a, b} : Edge{b, a}; }

double cross(const Point& u, const Point& v) { return u.x() * v.y() - u.y() * v.x(); }

// First structural defect of a candidate mesh. `index` names the offending
// triangle or loop position so file readers can map it back to a line.
struct Defect {
    enum class Where { vertex, triangle, loop } where;
    int index;
    std::string message;
};

std::optional<Defect> find_defect(const std::vector<Point>& vertices,
                                  const std::vector<Triangle>& triangles,
                                  const std::vector<int>& loop) {
    const int nv = static_cast<int>(vertices.size());
    for (int v = 0; v < nv; ++v) {
        if (!std::isfinite(vertices[v].x()) || !std::isfinite(vertices[v].y())) {
            return Defect{Defect::Where::vertex, v, "non-finite vertex coordinate"};
        }
    }
    if (triangles.empty()) {
        return Defect{Defect::Where::triangle, 0, "mesh has no triangles"};
    }

    // directed edge -> owning triangle count, for boundary detection
    std::map<Edge, int> edge_count;
    std::map<Edge, int> directed;
    for (int t = 0; t < static_cast<int>(triangles.size()); ++t) {
        const auto& tri = triangles[t];
        for (int k = 0; k < 3; ++k) {
            if (tri[k] < 0 || tri[k] >= nv) {
                return Defect{Defect::Where::triangle, t,
                              "triangle vertex index " + std::to_string(tri[k]) +
                                  " out of range (vertex count " + std::to_string(nv) + ")"};
            }
        }
        if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2]) {
            return Defect{Defect::Where::triangle, t, "triangle repeats a vertex"};
        }
        const Point& a = vertices[tri[0]];
        const Point& b = vertices[tri[1]];
        const Point& c = vertices[tri[2]];
        if (!(cross(b - a, c - a) > 0.0)) {
            return Defect{Defect::Where::triangle, t, "triangle has non-positive signed area"};
        }
        for (int k = 0; k < 3; ++k) {
            const int u = tri[k];
            const int w = tri[(k + 1) % 3];
            ++edge_count[undirected(u, w)];
            if (++directed[{u, w}] > 1) {
                return Defect{Defect::Where::triangle, t, "directed edge shared by two triangles"};
            }
        }
    }

    std::size_t boundary_edges = 0;
    for (const auto& [e, count] : edge_count) {
        if (count > 2) {
            return Defect{Defect::Where::triangle, 0, "edge shared by more than two triangles"};
        }
        if (count == 1) {
            ++boundary_edges;
        }
    }

    const int nb = static_cast<int>(loop.size());
    if (nb < 3) {
        return Defect{Defect::Where::loop, std::max(nb - 1, 0),
                      "boundary loop needs at least 3 vertices"};
    }
    std::vector<bool> seen(nv, false);
    for (int i = 0; i < nb; ++i) {
        const int v = loop[i];
        if (v < 0 || v >= nv) {
            return Defect{Defect::Where::loop, i,
                          "boundary vertex index " + std::to_string(v) + " out of range"};
        }
        if (seen[v]) {
            return Defect{Defect::Where::loop, i,
                          "boundary vertex " + std::to_string(v) + " appears twice"};
        }
        seen[v] = true;
    }
    for (int i = 0; i < nb; ++i) {
        const int a = loop[i];
        const int b = loop[(i + 1) % nb];
        const bool closing = (i == nb - 1);
        auto it = edge_count.find(undirected(a, b));
        if (it == edge_count.end() || it->second != 1) {
            if (closing) {
                return Defect{Defect::Where::loop, i, "boundary loop not closed"};
            }
            return Defect{Defect::Where::loop, i + 1,
                          "boundary loop step " + std::to_string(a) + " -> " + std::to_string(b) +
                              " is not a boundary edge"};
        }
        if (!directed.contains({a, b})) {
            return Defect{Defect::Where::loop, closing ? i : i + 1,
                          "boundary loop is not counterclockwise"};
        }
    }
    if (static_cast<std::size_t>(nb) != boundary_edges) {
        return Defect{Defect::Where::loop, nb - 1,
                      "boundary loop does not cover every boundary edge (" +
                          std::to_string(nb) + " of " + std::to_string(boundary_edges) + ")"};
    }
    return std::nullopt;
}

}  // namespace

Mesh Mesh::create(std::vector<Point> vertices, std::vector<Triangle> triangles,
                  std::vector<int> boundary_loop, std::optional<double> exact_boundary_curvature) {
    if (auto defect = find_defect(vertices, triangles, boundary_loop)) {
        throw ConfigError("invalid mesh: " + defect->message);
    }
    Mesh m;
    m.vertices_ = std::move(vertices);
    m.triangles_ = std::move(triangles);
    m.boundary_loop_ = std::move(boundary_loop);
    m.exact_curvature_ = exact_boundary_curvature;

    const int nb = m.num_boundary_nodes();
    m.boundary_edge_lengths_.resize(nb);
    for (int i = 0; i < nb; ++i) {
        const Point& a = m.vertices_[m.boundary_loop_[i]];
        const Point& b = m.vertices_[m.boundary_loop_[(i + 1) % nb]];
        m.boundary_edge_lengths_[i] = (b - a).norm();
    }
    m.boundary_mask_.assign(m.vertices_.size(), false);
    for (int v : m.boundary_loop_) {
        m.boundary_mask_[v] = true;
    }
    for (int v = 0; v < m.num_vertices(); ++v) {
        if (!m.boundary_mask_[v]) {
            m.interior_.push_back(v);
        }
    }
    return m;
}

double Mesh::signed_area(int t) const {
    const auto& tri = triangles_[t];
    const Point& a = vertices_[tri[0]];
    return 0.5 * cross(vertices_[tri[1]] - a, vertices_[tri[2]] - a);
}

double Mesh::total_area() const {
    double sum = 0.0;
    for (int t = 0; t < num_triangles(); ++t) {
        sum += signed_area(t);
    }
    return sum;
}

bool Mesh::operator==(const Mesh& other) const {
    return vertices_ == other.vertices_ && triangles_ == other.triangles_ &&
           boundary_loop_ == other.boundary_loop_;
}

Mesh generate_disk_mesh(int refinement_level) {
    if (refinement_level < 0 || refinement_level > kMaxRefinementLevel) {
        throw ConfigError("refinement level " + std::to_string(refinement_level) +
                          " out of range [0, " + std::to_string(kMaxRefinementLevel) + "]");
    }
    std::vector<Point> vertices{Point(0.0, 0.0)};
    std::vector<Triangle> triangles;
    std::vector<int> loop;
    for (int k = 0; k < 6; ++k) {
        const double angle = k * std::numbers::pi / 3.0;
        vertices.emplace_back(std::cos(angle), std::sin(angle));
        loop.push_back(k + 1);
        triangles.push_back({0, k + 1, (k + 1) % 6 + 1});
    }
    Mesh mesh = Mesh::create(std::move(vertices), std::move(triangles), std::move(loop), 1.0);
    for (int level = 0; level < refinement_level; ++level) {
        mesh = refine(mesh, 1.0);
    }
    return mesh;
}

Mesh refine(const Mesh& mesh, std::optional<double> project_radius) {
    std::vector<Point> vertices = mesh.vertices();
    const auto& loop = mesh.boundary_loop();
    const int nb = mesh.num_boundary_nodes();

    std::map<Edge, bool> on_boundary;
    for (int i = 0; i < nb; ++i) {
        on_boundary[undirected(loop[i], loop[(i + 1) % nb])] = true;
    }

    std::map<Edge, int> midpoint;
    auto mid = [&](int a, int b) {
        const Edge e = undirected(a, b);
        auto it = midpoint.find(e);
        if (it != midpoint.end()) {
            return it->second;
        }
        Point p = 0.5 * (vertices[a] + vertices[b]);
        if (project_radius && on_boundary.contains(e)) {
            p *= *project_radius / p.norm();
        }
        const int id = static_cast<int>(vertices.size());
        vertices.push_back(p);
        midpoint.emplace(e, id);
        return id;
    };

    std::vector<Triangle> triangles;
    triangles.reserve(4 * mesh.triangles().size());
    for (const auto& tri : mesh.triangles()) {
        const int a = tri[0], b = tri[1], c = tri[2];
        const int ab = mid(a, b), bc = mid(b, c), ca = mid(c, a);
        triangles.push_back({a, ab, ca});
        triangles.push_back({ab, b, bc});
        triangles.push_back({ca, bc, c});
        triangles.push_back({ab, bc, ca});
    }

    std::vector<int> new_loop;
    new_loop.reserve(2 * nb);
    for (int i = 0; i < nb; ++i) {
        new_loop.push_back(loop[i]);
        new_loop.push_back(midpoint.at(undirected(loop[i], loop[(i + 1) % nb])));
    }

    std::optional<double> curvature;
    if (project_radius) {
        curvature = 1.0 / *project_radius;
    }
    return Mesh::create(std::move(vertices), std::move(triangles), std::move(new_loop), curvature);
}

BoundaryGeometry boundary_geometry(const Mesh& mesh) {
    const auto& loop = mesh.boundary_loop();
    const auto& len = mesh.boundary_edge_lengths();
    const int nb = mesh.num_boundary_nodes();
    if (nb < 3) {
        throw ConfigError("mesh has no boundary loop");
    }
    BoundaryGeometry geom;
    geom.node_weight.resize(nb);
    geom.node_curvature.resize(nb);
    for (int i = 0; i < nb; ++i) {
        const int prev = (i + nb - 1) % nb;
        geom.node_weight[i] = 0.5 * (len[prev] + len[i]);
        geom.total_length += len[i];

        if (auto exact = mesh.exact_boundary_curvature()) {
            geom.node_curvature[i] = *exact;
            continue;
        }
        // circumscribed circle through the node and its two loop neighbours
        const Point& a = mesh.vertices()[loop[prev]];
        const Point& b = mesh.vertices()[loop[i]];
        const Point& c = mesh.vertices()[loop[(i + 1) % nb]];
        const double denom = (b - a).norm() * (c - b).norm() * (c - a).norm();
        geom.node_curvature[i] = denom > 0.0 ? 2.0 * cross(b - a, c - b) / denom : 0.0;
    }
    return geom;
}

// ---------------------------------------------------------------------------
// patmesh 1

void write_mesh(std::ostream& out, const Mesh& mesh) {
    out << "patmesh 1\n" << std::setprecision(17);
    out << "vertices " << mesh.num_vertices() << '\n';
    for (const auto& p : mesh.vertices()) {
        out << p.x() << ' ' << p.y() << '\n';
    }
    out << "triangles " << mesh.num_triangles() << '\n';
    for (const auto& t : mesh.triangles()) {
        out << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
    }
    out << "boundary " << mesh.num_boundary_nodes() << '\n';
    for (int v : mesh.boundary_loop()) {
        out << v << '\n';
    }
}

namespace {

// Splits the stream into non-empty, comment-stripped lines, remembering the
// original line number of each.
class LineReader {
public:
    explicit LineReader(std::istream& in) : in_(in) {}

    bool next(std::istringstream& fields) {
        std::string line;
        while (std::getline(in_, line)) {
            ++line_no_;
            if (auto hash = line.find('#'); hash != std::string::npos) {
                line.erase(hash);
            }
            if (line.find_first_not_of(" \t\r") == std::string::npos) {
                continue;
            }
            fields.clear();
            fields.str(line);
            return true;
        }
        return false;
    }

    int line() const { return line_no_; }

    [[noreturn]] void fail(const std::string& what) const { fail_at(line_no_, what); }

    [[noreturn]] static void fail_at(int line, const std::string& what) {
        throw IoError("line " + std::to_string(line) + ": " + what);
    }

private:
    std::istream& in_;
    int line_no_ = 0;
};

template <typename T>
T read_value(std::istringstream& fields, LineReader& reader, const char* what) {
    T value{};
    if (!(fields >> value)) {
        reader.fail(std::string("expected ") + what);
    }
    return value;
}

void expect_end(std::istringstream& fields, LineReader& reader) {
    std::string extra;
    if (fields >> extra) {
        reader.fail("unexpected trailing token '" + extra + "'");
    }
}

int read_section(LineReader& reader, const std::string& keyword) {
    std::istringstream fields;
    if (!reader.next(fields)) {
        reader.fail("missing '" + keyword + "' section");
    }
    std::string word;
    fields >> word;
    if (word != keyword) {
        reader.fail("expected '" + keyword + "', found '" + word + "'");
    }
    const long count = read_value<long>(fields, reader, "a count");
    if (count < 0) {
        reader.fail("negative count");
    }
    expect_end(fields, reader);
    return static_cast<int>(count);
}

}  // namespace

Mesh read_mesh(std::istream& in) {
    LineReader reader(in);
    std::istringstream fields;
    if (!reader.next(fields)) {
        reader.fail("empty file, expected 'patmesh 1' header");
    }
    {
        std::string magic;
        int version = 0;
        if (!(fields >> magic >> version) || magic != "patmesh" || version != 1) {
            reader.fail("malformed header, expected 'patmesh 1'");
        }
        expect_end(fields, reader);
    }

    const int nv = read_section(reader, "vertices");
    std::vector<Point> vertices;
    std::vector<int> vertex_lines;
    vertices.reserve(nv);
    for (int i = 0; i < nv; ++i) {
        if (!reader.next(fields)) {
            reader.fail("unexpected end of file in vertices");
        }
        const double x = read_value<double>(fields, reader, "x coordinate");
        const double y = read_value<double>(fields, reader, "y coordinate");
        expect_end(fields, reader);
        vertices.emplace_back(x, y);
        vertex_lines.push_back(reader.line());
    }

    const int nt = read_section(reader, "triangles");
    std::vector<Triangle> triangles;
    std::vector<int> triangle_lines;
    triangles.reserve(nt);
    for (int i = 0; i < nt; ++i) {
        if (!reader.next(fields)) {
            reader.fail("unexpected end of file in triangles");
        }
        Triangle t{};
        for (int k = 0; k < 3; ++k) {
            t[k] = read_value<int>(fields, reader, "vertex index");
            if (t[k] < 0 || t[k] >= nv) {
                reader.fail("triangle vertex index " + std::to_string(t[k]) +
                            " out of range (vertex count " + std::to_string(nv) + ")");
            }
        }
        expect_end(fields, reader);
        triangles.push_back(t);
        triangle_lines.push_back(reader.line());
    }

    const int nb = read_section(reader, "boundary");
    std::vector<int> loop;
    std::vector<int> loop_lines;
    loop.reserve(nb);
    for (int i = 0; i < nb; ++i) {
        if (!reader.next(fields)) {
            reader.fail("unexpected end of file in boundary");
        }
        const int v = read_value<int>(fields, reader, "vertex index");
        if (v < 0 || v >= nv) {
            reader.fail("boundary vertex index " + std::to_string(v) + " out of range (vertex count " +
                        std::to_string(nv) + ")");
        }
        expect_end(fields, reader);
        loop.push_back(v);
        loop_lines.push_back(reader.line());
    }
    // An explicitly repeated first vertex just closes the loop.
    if (loop.size() > 3 && loop.front() == loop.back()) {
        loop.pop_back();
        loop_lines.pop_back();
    }
    if (reader.next(fields)) {
        reader.fail("unexpected content after boundary section");
    }

    if (auto defect = find_defect(vertices, triangles, loop)) {
        int line = reader.line();
        switch (defect->where) {
            case Defect::Where::vertex:
                line = vertex_lines.at(defect->index);
                break;
            case Defect::Where::triangle:
                if (!triangle_lines.empty()) {
                    line = triangle_lines.at(std::min<std::size_t>(defect->index, triangle_lines.size() - 1));
                }
                break;
            case Defect::Where::loop:
                if (!loop_lines.empty()) {
                    line = loop_lines.at(std::min<std::size_t>(defect->index, loop_lines.size() - 1));
                }
                break;
        }
        LineReader::fail_at(line, defect->message);
    }
    return Mesh::create(std::move(vertices), std::move(triangles), std::move(loop));
}

void save_mesh(const Mesh& mesh, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    write_mesh(out, mesh);
    if (!out) {
        throw IoError("write to " + path.string() + " failed");
    }
}

Mesh load_mesh(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    try {
        return read_mesh(in);
    } catch (const IoError& e) {
        throw IoError(path.string() + ": " + e.what());
    }
}

}  // namespace pat
