#include "pat/image.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace pat {

std::string render_field_pgm(const Field& field, const Mesh& mesh, int resolution) {
    if (resolution < 16) {
        throw ConfigError("image resolution must be at least 16");
    }
    if (mesh.num_triangles() == 0) {
        throw ConfigError("cannot render on an empty mesh");
    }
    if (field.size() != mesh.num_vertices()) {
        throw ConfigError("field size does not match the mesh");
    }
    double extent = 0.0;
    for (const Point& p : mesh.vertices()) {
        extent = std::max(extent, p.cwiseAbs().maxCoeff());
    }
    const double lo = field.minCoeff();
    const double hi = field.maxCoeff();
    const double pixel = 2.0 * extent / resolution;

    const std::string header =
        "P5\n" + std::to_string(resolution) + " " + std::to_string(resolution) + "\n255\n";
    std::string image(header.size() + static_cast<std::size_t>(resolution) * resolution, '\0');
    std::copy(header.begin(), header.end(), image.begin());
    unsigned char* px = reinterpret_cast<unsigned char*>(image.data() + header.size());

    for (int t = 0; t < mesh.num_triangles(); ++t) {
        const auto& tri = mesh.triangles()[t];
        const Point& a = mesh.vertices()[tri[0]];
        const Point& b = mesh.vertices()[tri[1]];
        const Point& c = mesh.vertices()[tri[2]];
        const double det = (b - a).x() * (c - a).y() - (b - a).y() * (c - a).x();
        const double xmin = std::min({a.x(), b.x(), c.x()});
        const double xmax = std::max({a.x(), b.x(), c.x()});
        const double ymin = std::min({a.y(), b.y(), c.y()});
        const double ymax = std::max({a.y(), b.y(), c.y()});
        const int j0 = std::max(0, static_cast<int>(std::floor((xmin + extent) / pixel - 0.5)));
        const int j1 = std::min(resolution - 1,
                                static_cast<int>(std::ceil((xmax + extent) / pixel - 0.5)));
        const int i0 = std::max(0, static_cast<int>(std::floor((extent - ymax) / pixel - 0.5)));
        const int i1 = std::min(resolution - 1,
                                static_cast<int>(std::ceil((extent - ymin) / pixel - 0.5)));
        for (int i = i0; i <= i1; ++i) {
            const double y = extent - (i + 0.5) * pixel;
            for (int j = j0; j <= j1; ++j) {
                const double x = -extent + (j + 0.5) * pixel;
                const Point d(x - a.x(), y - a.y());
                const double l1 = (d.x() * (c - a).y() - d.y() * (c - a).x()) / det;
                const double l2 = ((b - a).x() * d.y() - (b - a).y() * d.x()) / det;
                const double l0 = 1.0 - l1 - l2;
                constexpr double eps = -1e-12;
                if (l0 < eps || l1 < eps || l2 < eps) {
                    continue;
                }
                const double v = l0 * field[tri[0]] + l1 * field[tri[1]] + l2 * field[tri[2]];
                int level = 128;
                if (hi > lo) {
                    level = static_cast<int>(std::lround(255.0 * (v - lo) / (hi - lo)));
                }
                px[static_cast<std::size_t>(i) * resolution + j] =
                    static_cast<unsigned char>(std::clamp(level, 0, 255));
            }
        }
    }
    return image;
}

void save_field_pgm(const Field& field, const Mesh& mesh, int resolution,
                    const std::filesystem::path& path) {
    const std::string bytes = render_field_pgm(field, mesh, resolution);
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw IoError("write to " + path.string() + " failed");
    }
}

}  // namespace pat
