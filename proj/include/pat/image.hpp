#pragma once

#include "pat/common.hpp"
#include "pat/mesh.hpp"

#include <filesystem>
#include <string>

namespace pat {

/// Binary PGM (P5, maxval 255) of a P1 field, rasterized by barycentric
/// interpolation on the square [-e, e]^2 with e the largest vertex coordinate
/// magnitude. Pixel (i, j) samples x = -e + (j + 1/2) 2e/res and
/// y = e - (i + 1/2) 2e/res. Field values map linearly from [min, max] to
/// [0, 255]; a constant field maps to 128; pixels outside the mesh are 0.
std::string render_field_pgm(const Field& field, const Mesh& mesh, int resolution);

void save_field_pgm(const Field& field, const Mesh& mesh, int resolution,
                    const std::filesystem::path& path);

}  // namespace pat
