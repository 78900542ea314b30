#include "pat/phantoms.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

namespace pat {

namespace {

// Shepp and Logan's original table; the modified variant (Toft) changes only
// the intensities to make the inner structures visible.
const std::vector<Ellipse> kStandard = {
    {2.00, 0.69, 0.92, 0.00, 0.0000, 0.0},      {-0.98, 0.6624, 0.874, 0.00, -0.0184, 0.0},
    {-0.02, 0.11, 0.31, 0.22, 0.0000, -18.0},   {-0.02, 0.16, 0.41, -0.22, 0.0000, 18.0},
    {0.01, 0.21, 0.25, 0.00, 0.3500, 0.0},      {0.01, 0.046, 0.046, 0.00, 0.1000, 0.0},
    {0.01, 0.046, 0.046, 0.00, -0.1000, 0.0},   {0.01, 0.046, 0.023, -0.08, -0.6050, 0.0},
    {0.01, 0.023, 0.023, 0.00, -0.6060, 0.0},   {0.01, 0.023, 0.046, 0.06, -0.6050, 0.0},
};

std::vector<Ellipse> modified_table() {
    static const double intensity[] = {1.0, -0.8, -0.2, -0.2, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1};
    std::vector<Ellipse> out = kStandard;
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i].intensity = intensity[i];
    }
    return out;
}

}  // namespace

bool Ellipse::contains(double x, double y) const {
    const double t = phi_deg * M_PI / 180.0;
    const double dx = x - x0;
    const double dy = y - y0;
    const double u = dx * std::cos(t) + dy * std::sin(t);
    const double v = -dx * std::sin(t) + dy * std::cos(t);
    return (u * u) / (a * a) + (v * v) / (b * b) <= 1.0;
}

const std::vector<Ellipse>& shepp_logan_ellipses(SheppLoganVariant variant) {
    static const std::vector<Ellipse> modified = modified_table();
    return variant == SheppLoganVariant::standard ? kStandard : modified;
}

double shepp_logan_value(double x, double y, SheppLoganVariant variant) {
    double value = 0.0;
    for (const Ellipse& e : shepp_logan_ellipses(variant)) {
        if (e.contains(x, y)) {
            value += e.intensity;
        }
    }
    return value;
}

Field shepp_logan(const Mesh& mesh, double scale, SheppLoganVariant variant) {
    if (!(scale > 0.0 && scale < 1.0)) {
        throw ConfigError("phantom scale must lie in (0, 1) (got " + std::to_string(scale) + ")");
    }
    Field f = Field::Zero(mesh.num_vertices());
    for (int v = 0; v < mesh.num_vertices(); ++v) {
        const Point q = mesh.vertices()[v] / scale;
        if (mesh.boundary_mask()[v] || q.squaredNorm() > 1.0) {
            continue;
        }
        f[v] = shepp_logan_value(q.x(), q.y(), variant);
    }
    return f;
}

Field smooth_blobs(const Mesh& mesh, const std::vector<Blob>& blobs) {
    for (const Blob& blob : blobs) {
        if (!(blob.radius > 0.0) || !blob.center.allFinite() || !std::isfinite(blob.amplitude)) {
            throw ConfigError("blob radius must be positive and all blob values finite");
        }
        for (int v : mesh.boundary_loop()) {
            if ((mesh.vertices()[v] - blob.center).norm() <= blob.radius) {
                throw ConfigError("blob at (" + std::to_string(blob.center.x()) + ", " +
                                  std::to_string(blob.center.y()) + ") reaches the boundary");
            }
        }
    }
    Field f = Field::Zero(mesh.num_vertices());
    for (int v = 0; v < mesh.num_vertices(); ++v) {
        for (const Blob& blob : blobs) {
            const double s = (mesh.vertices()[v] - blob.center).squaredNorm() /
                             (blob.radius * blob.radius);
            if (s < 1.0) {
                f[v] += blob.amplitude * std::pow(1.0 - s, 3);
            }
        }
    }
    return f;
}

void write_field(std::ostream& out, const Field& field) {
    out << "patfield 1\nnodes " << field.size() << '\n' << std::setprecision(17);
    for (Eigen::Index i = 0; i < field.size(); ++i) {
        out << field[i] << '\n';
    }
}

Field read_field(std::istream& in) {
    int line_no = 0;
    std::string line;
    std::istringstream tokens;
    auto next = [&] {
        while (std::getline(in, line)) {
            ++line_no;
            if (auto hash = line.find('#'); hash != std::string::npos) {
                line.erase(hash);
            }
            if (line.find_first_not_of(" \t\r") != std::string::npos) {
                tokens.clear();
                tokens.str(line);
                return true;
            }
        }
        return false;
    };
    auto fail = [&](const std::string& what) {
        throw IoError("line " + std::to_string(line_no) + ": " + what);
    };

    std::string word;
    int version = 0;
    if (!next() || !(tokens >> word >> version) || word != "patfield" || version != 1) {
        fail("malformed header, expected 'patfield 1'");
    }
    long count = -1;
    if (!next() || !(tokens >> word >> count) || word != "nodes" || count < 0) {
        fail("malformed size line, expected 'nodes <N>'");
    }
    Field f(count);
    long filled = 0;
    while (filled < count && next()) {
        double value = 0.0;
        while (tokens >> value) {
            if (filled == count) {
                fail("more than " + std::to_string(count) + " values");
            }
            f[filled++] = value;
        }
        if (!tokens.eof()) {
            fail("unparsable value");
        }
    }
    if (filled < count) {
        fail("expected " + std::to_string(count) + " values, found " + std::to_string(filled));
    }
    if (next()) {
        fail("unexpected content after the last value");
    }
    return f;
}

void save_field(const Field& field, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    write_field(out, field);
    if (!out) {
        throw IoError("write to " + path.string() + " failed");
    }
}

Field load_field(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    try {
        return read_field(in);
    } catch (const IoError& e) {
        throw IoError(path.string() + ": " + e.what());
    }
}

}  // namespace pat
