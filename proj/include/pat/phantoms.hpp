#pragma once

#include "pat/common.hpp"
#include "pat/mesh.hpp"

#include <filesystem>
#include <iosfwd>
#include <vector>

namespace pat {

struct Ellipse {
    double intensity;
    double a;  ///< semi-axis along the rotated x direction
    double b;  ///< semi-axis along the rotated y direction
    double x0;
    double y0;
    double phi_deg;  ///< counterclockwise rotation

    bool contains(double x, double y) const;
};

enum class SheppLoganVariant {
    standard,  ///< original intensities, 1.02 in the central region
    modified,  ///< higher-contrast intensities, 0.2 in the central region
};

/// Ten ellipses on [-1, 1]^2 (Shepp and Logan, IEEE Trans. Nucl. Sci. 21, 1974).
const std::vector<Ellipse>& shepp_logan_ellipses(SheppLoganVariant variant);

/// Sum of the intensities of the ellipses containing (x, y).
double shepp_logan_value(double x, double y, SheppLoganVariant variant);

/// Phantom squeezed into the disk of radius `scale`, sampled at the vertices.
/// Vertices outside that disk and boundary vertices are 0. Throws ConfigError
/// unless 0 < scale < 1.
Field shepp_logan(const Mesh& mesh, double scale = 0.9,
                  SheppLoganVariant variant = SheppLoganVariant::standard);

struct Blob {
    Point center;
    double radius;
    double amplitude;
};

/// Sum of amplitude (1 - r^2/R^2)^3 bumps, exactly zero beyond each radius.
/// Throws ConfigError for a nonpositive radius or a blob reaching a boundary
/// node.
Field smooth_blobs(const Mesh& mesh, const std::vector<Blob>& blobs);

// "patfield 1" text format.
void write_field(std::ostream& out, const Field& field);
Field read_field(std::istream& in);
void save_field(const Field& field, const std::filesystem::path& path);
Field load_field(const std::filesystem::path& path);

}  // namespace pat
