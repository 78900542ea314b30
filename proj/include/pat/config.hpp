#pragma once

#include "pat/adjoint.hpp"
#include "pat/medium.hpp"
#include "pat/phantoms.hpp"
#include "pat/sensor.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>

namespace pat {

/// Everything a CLI run needs. Defaults reproduce the water / Parylene /
/// polycarbonate sensor on a 1 cm disk in units of 1 cm and 1500 m/s.
struct RunConfig {
    MediumParams medium = default_nondimensional_medium();

    int refinement = 4;
    int data_refinement = -1;  ///< mesh for synthetic data; -1 means refinement + 1
    double cfl_safety = 0.2;
    double T = 2.5;

    MeasurementModel model = MeasurementModel::fabry_perot;
    double scale = 1.0;

    double gamma = 0.0;  ///< 0 selects 0.9 / ||F||^2
    int iterations = 60;
    std::uint64_t seed = 1;
    int norm_iterations = 20;
    bool stop_on_stagnation = false;
    int keep_every = 0;
    AdjointKind adjoint = AdjointKind::continuous;

    std::string phantom = "shepp_logan";  ///< shepp_logan | blobs
    SheppLoganVariant phantom_variant = SheppLoganVariant::standard;
    double phantom_scale = 0.9;

    std::string mesh_path;  ///< when set, replaces the generated disk mesh
    std::string data_path;
    std::string truth_path;
    std::string output_dir = "pat_out";
    int image_resolution = 256;

    int effective_data_refinement() const {
        return data_refinement < 0 ? refinement + 1 : data_refinement;
    }
    bool operator==(const RunConfig&) const = default;
};

/// `key = value` lines; `#` starts a comment. Unknown keys, unparsable or
/// out-of-range values throw ConfigError with `<source>:<line>: ` prefix.
RunConfig parse_config(std::istream& in, const std::string& source = "<config>");
/// Throws IoError when the file cannot be opened.
RunConfig load_config(const std::filesystem::path& path);

/// Writes every key at full precision; parse_config reads it back unchanged.
void dump_config(std::ostream& out, const RunConfig& config);

/// Throws ConfigError naming `key` when `value` is empty.
void require_path(const std::string& value, const char* key);

}  // namespace pat
