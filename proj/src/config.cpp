#include "pat/config.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iomanip>
#include <sstream>
#include <vector>

namespace pat {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_double(const std::string& text) {
    if (text.empty()) {
        throw ConfigError("empty value");
    }
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(text.c_str(), &end);
    if (*end != '\0' || errno == ERANGE || !std::isfinite(v)) {
        throw ConfigError("expected a finite number, got '" + text + "'");
    }
    return v;
}

long long parse_int(const std::string& text) {
    if (text.empty()) {
        throw ConfigError("empty value");
    }
    char* end = nullptr;
    errno = 0;
    const long long v = std::strtoll(text.c_str(), &end, 10);
    if (*end != '\0' || errno == ERANGE) {
        throw ConfigError("expected an integer, got '" + text + "'");
    }
    return v;
}

bool parse_bool(const std::string& text) {
    if (text == "true" || text == "1") {
        return true;
    }
    if (text == "false" || text == "0") {
        return false;
    }
    throw ConfigError("expected true or false, got '" + text + "'");
}

std::string format_double(double v) {
    std::ostringstream s;
    s << std::setprecision(17) << v;
    return s.str();
}

struct Key {
    const char* name;
    std::function<void(RunConfig&, const std::string&)> set;
    std::function<std::string(const RunConfig&)> get;
};

Key real(const char* name, double RunConfig::*member, double min, bool min_open, double max,
         bool max_open) {
    return {name,
            [=](RunConfig& c, const std::string& text) {
                const double v = parse_double(text);
                const bool low = min_open ? v <= min : v < min;
                const bool high = max_open ? v >= max : v > max;
                if (low || high) {
                    throw ConfigError("value " + text + " out of range");
                }
                c.*member = v;
            },
            [=](const RunConfig& c) { return format_double(c.*member); }};
}

Key medium_real(const char* name, double MediumParams::*member, bool positive) {
    return {name,
            [=](RunConfig& c, const std::string& text) {
                const double v = parse_double(text);
                if (positive ? !(v > 0.0) : false) {
                    throw ConfigError("must be positive (got " + text + ")");
                }
                c.medium.*member = v;
            },
            [=](const RunConfig& c) { return format_double(c.medium.*member); }};
}

Key integer(const char* name, int RunConfig::*member, long long min, long long max) {
    return {name,
            [=](RunConfig& c, const std::string& text) {
                const long long v = parse_int(text);
                if (v < min || v > max) {
                    throw ConfigError("value " + text + " out of range [" + std::to_string(min) +
                                      ", " + std::to_string(max) + "]");
                }
                c.*member = static_cast<int>(v);
            },
            [=](const RunConfig& c) { return std::to_string(c.*member); }};
}

Key text(const char* name, std::string RunConfig::*member) {
    return {name, [=](RunConfig& c, const std::string& v) { c.*member = v; },
            [=](const RunConfig& c) { return c.*member; }};
}

const std::vector<Key>& keys() {
    static const std::vector<Key> table = {
        medium_real("c", &MediumParams::c, true),
        medium_real("rho", &MediumParams::rho, true),
        medium_real("c_s", &MediumParams::c_s, true),
        medium_real("rho_s", &MediumParams::rho_s, true),
        medium_real("c_b", &MediumParams::c_b, true),
        medium_real("rho_b", &MediumParams::rho_b, true),
        {"h",
         [](RunConfig& c, const std::string& t) {
             const double v = parse_double(t);
             if (v < 0.0) {
                 throw ConfigError("must be nonnegative (got " + t + ")");
             }
             c.medium.h = v;
         },
         [](const RunConfig& c) { return format_double(c.medium.h); }},
        medium_real("curvature_H", &MediumParams::H, false),
        medium_real("curvature_K", &MediumParams::K, false),
        integer("refinement", &RunConfig::refinement, 0, kMaxRefinementLevel),
        integer("data_refinement", &RunConfig::data_refinement, -1, kMaxRefinementLevel),
        real("cfl_safety", &RunConfig::cfl_safety, 0.0, true, 1.0, false),
        real("T", &RunConfig::T, 0.0, true, 1e6, false),
        {"model",
         [](RunConfig& c, const std::string& t) { c.model = parse_measurement_model(t); },
         [](const RunConfig& c) { return to_string(c.model); }},
        real("scale", &RunConfig::scale, 0.0, true, 1e300, false),
        real("gamma", &RunConfig::gamma, 0.0, false, 1e300, false),
        integer("iterations", &RunConfig::iterations, 1, 1000000),
        {"seed",
         [](RunConfig& c, const std::string& t) {
             if (t.empty() || t.find_first_not_of("0123456789") != std::string::npos) {
                 throw ConfigError("expected a nonnegative integer, got '" + t + "'");
             }
             char* end = nullptr;
             errno = 0;
             const unsigned long long v = std::strtoull(t.c_str(), &end, 10);
             if (*end != '\0' || errno == ERANGE) {
                 throw ConfigError("seed out of range: '" + t + "'");
             }
             c.seed = static_cast<std::uint64_t>(v);
         },
         [](const RunConfig& c) { return std::to_string(c.seed); }},
        integer("norm_iterations", &RunConfig::norm_iterations, 1, 100000),
        {"stop_on_stagnation",
         [](RunConfig& c, const std::string& t) { c.stop_on_stagnation = parse_bool(t); },
         [](const RunConfig& c) { return std::string(c.stop_on_stagnation ? "true" : "false"); }},
        integer("keep_every", &RunConfig::keep_every, 0, 1000000),
        {"adjoint",
         [](RunConfig& c, const std::string& t) {
             if (t == "continuous") {
                 c.adjoint = AdjointKind::continuous;
             } else if (t == "discrete") {
                 c.adjoint = AdjointKind::discrete;
             } else {
                 throw ConfigError("expected continuous or discrete, got '" + t + "'");
             }
         },
         [](const RunConfig& c) {
             return std::string(c.adjoint == AdjointKind::discrete ? "discrete" : "continuous");
         }},
        {"phantom",
         [](RunConfig& c, const std::string& t) {
             if (t != "shepp_logan" && t != "blobs") {
                 throw ConfigError("expected shepp_logan or blobs, got '" + t + "'");
             }
             c.phantom = t;
         },
         [](const RunConfig& c) { return c.phantom; }},
        {"phantom_variant",
         [](RunConfig& c, const std::string& t) {
             if (t == "standard") {
                 c.phantom_variant = SheppLoganVariant::standard;
             } else if (t == "modified") {
                 c.phantom_variant = SheppLoganVariant::modified;
             } else {
                 throw ConfigError("expected standard or modified, got '" + t + "'");
             }
         },
         [](const RunConfig& c) {
             return std::string(c.phantom_variant == SheppLoganVariant::standard ? "standard"
                                                                                 : "modified");
         }},
        real("phantom_scale", &RunConfig::phantom_scale, 0.0, true, 1.0, true),
        text("mesh", &RunConfig::mesh_path),
        text("data", &RunConfig::data_path),
        text("truth", &RunConfig::truth_path),
        text("output_dir", &RunConfig::output_dir),
        integer("image_resolution", &RunConfig::image_resolution, 16, 8192),
    };
    return table;
}

}  // namespace

RunConfig parse_config(std::istream& in, const std::string& source) {
    RunConfig config;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string where = source + ":" + std::to_string(line_no) + ": ";
        if (auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        if (trim(line).empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(where + "expected 'key = value'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const Key* entry = nullptr;
        for (const Key& k : keys()) {
            if (key == k.name) {
                entry = &k;
            }
        }
        if (!entry) {
            throw ConfigError(where + "unknown key '" + key + "'");
        }
        try {
            entry->set(config, value);
        } catch (const ConfigError& e) {
            throw ConfigError(where + key + ": " + e.what());
        }
    }
    if (in.bad()) {
        throw IoError(source + ": read error");
    }
    return config;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    return parse_config(in, path.string());
}

void dump_config(std::ostream& out, const RunConfig& config) {
    for (const Key& k : keys()) {
        out << k.name << " = " << k.get(config) << '\n';
    }
}

void require_path(const std::string& value, const char* key) {
    if (value.empty()) {
        throw ConfigError(std::string("missing required path '") + key + "'");
    }
}

}  // namespace pat
