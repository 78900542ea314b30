#include "pat/config.hpp"
#include "pat/directivity.hpp"
#include "pat/image.hpp"
#include "pat/inversion.hpp"
#include "pat/phantoms.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace pat;

namespace {

enum Exit { ok = 0, config_error = 2, numerical_error = 3, io_error = 4 };

struct Globals {
    std::string config_path;
    std::vector<std::string> overrides;
    bool deterministic = false;
    bool discrete_adjoint = false;
};

RunConfig resolve_config(const Globals& g) {
    std::ostringstream text;
    if (!g.config_path.empty()) {
        std::ifstream in(g.config_path);
        if (!in) {
            throw IoError("cannot open " + g.config_path);
        }
        text << in.rdbuf() << '\n';
    }
    for (const auto& kv : g.overrides) {
        text << kv << '\n';
    }
    std::istringstream in(text.str());
    RunConfig c = parse_config(in, g.config_path.empty() ? "<args>" : g.config_path);
    if (g.discrete_adjoint) {
        c.adjoint = AdjointKind::discrete;
    }
    return c;
}

Mesh base_mesh(const RunConfig& c) {
    return c.mesh_path.empty() ? generate_disk_mesh(c.refinement) : load_mesh(c.mesh_path);
}

Mesh data_mesh(const RunConfig& c, const Mesh& coarse) {
    if (c.mesh_path.empty()) {
        const int level = c.effective_data_refinement();
        if (level <= c.refinement) {
            throw ConfigError("data_refinement must exceed refinement");
        }
        return generate_disk_mesh(level);
    }
    std::optional<double> radius;
    if (auto k = coarse.exact_boundary_curvature(); k && *k > 0.0) {
        radius = 1.0 / *k;
    }
    return refine(coarse, radius);
}

Field make_phantom(const RunConfig& c, const Mesh& mesh) {
    if (c.phantom == "blobs") {
        const double s = c.phantom_scale;
        return smooth_blobs(mesh, {{{0.3 * s, 0.2 * s}, 0.3 * s, 1.0},
                                   {{-0.35 * s, -0.1 * s}, 0.25 * s, 0.7},
                                   {{0.0, -0.45 * s}, 0.2 * s, -0.5}});
    }
    return shepp_logan(mesh, c.phantom_scale, c.phantom_variant);
}

DiscretizationOptions discretization(const RunConfig& c) {
    DiscretizationOptions o;
    o.T = c.T;
    o.cfl_safety = c.cfl_safety;
    return o;
}

PatProblem problem_for(const RunConfig& c, Mesh mesh, MeasurementModel model) {
    return make_problem(std::move(mesh), c.medium, model, discretization(c), c.scale);
}

LandweberOptions landweber_options(const RunConfig& c) {
    LandweberOptions o;
    o.iterations = c.iterations;
    o.gamma = c.gamma;
    o.norm_iterations = c.norm_iterations;
    o.seed = c.seed;
    o.adjoint = c.adjoint;
    o.stop_on_stagnation = c.stop_on_stagnation;
    o.keep_every = c.keep_every;
    return o;
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw IoError("cannot create " + dir.string() + ": " + ec.message());
    }
}

void print_summary(const std::string& label, const ReconReport& r) {
    std::cout << label << ": iterations " << r.iterations << " gamma " << r.gamma << " norm "
              << r.norm_estimate << " residual " << r.residual_history.back();
    if (!r.error_history.empty()) {
        std::cout << " relative_error " << r.error_history.back();
    }
    std::cout << '\n';
}

void cmd_mesh(const RunConfig& c, const std::string& out) {
    const Mesh mesh = base_mesh(c);
    save_mesh(mesh, out);
    std::cout << "vertices " << mesh.num_vertices() << " triangles " << mesh.num_triangles()
              << " boundary " << mesh.num_boundary_nodes() << '\n';
}

void cmd_phantom(const RunConfig& c, const std::string& out, const std::string& pgm) {
    const Mesh mesh = base_mesh(c);
    const Field f = make_phantom(c, mesh);
    save_field(f, out);
    if (!pgm.empty()) {
        save_field_pgm(f, mesh, c.image_resolution, pgm);
    }
}

void cmd_forward(const RunConfig& c, const std::string& input, const std::string& out) {
    const Mesh mesh = base_mesh(c);
    const Field p0 = input.empty() ? make_phantom(c, mesh) : load_field(input);
    const PatProblem pb = problem_for(c, mesh, c.model);
    const Measurement m = forward_operator(pb, p0, Field::Zero(mesh.num_vertices()));
    save_trace(m.trace, out, to_string(m.model));
    std::cout << "dt " << pb.dt() << " samples " << pb.samples() << " nodes "
              << pb.boundary->nodes() << '\n';
}

void cmd_reconstruct(const RunConfig& c) {
    require_path(c.data_path, "data");
    const Mesh mesh = base_mesh(c);
    const PatProblem pb = problem_for(c, mesh, c.model);
    Measurement m{load_trace(c.data_path), c.model};
    std::optional<Field> truth;
    if (!c.truth_path.empty()) {
        truth = load_field(c.truth_path);
    }
    const ReconReport r = landweber(pb, m, landweber_options(c), truth ? &*truth : nullptr);
    const fs::path dir = c.output_dir;
    ensure_dir(dir);
    write_report(r, dir);
    save_field(r.result, dir / "result.field");
    save_field_pgm(r.result, mesh, c.image_resolution, dir / "result.pgm");
    print_summary(to_string(c.model), r);
}

void cmd_directivity(const RunConfig& c, double step) {
    std::cout << std::setprecision(17);
    std::cout << "theta_deg,R,D\n";
    for (const auto& s : directivity_curve(c.medium, step)) {
        std::cout << s.theta_deg << ',' << s.R << ',' << s.D << '\n';
    }
    if (auto z = directivity_zero(c.medium)) {
        std::cout << "# zero_crossing_deg " << *z << '\n';
    } else {
        std::cout << "# zero_crossing_deg none\n";
    }
    if (auto a = critical_angle(c.medium)) {
        std::cout << "# critical_angle_deg " << *a << '\n';
    }
}

void cmd_adjoint_test(const RunConfig& c, int pairs) {
    const PatProblem pb = problem_for(c, base_mesh(c), c.model);
    const auto samples = dot_product_study(pb, pairs, c.seed, c.adjoint);
    std::cout << std::setprecision(17);
    std::cout << "# pair forward_side adjoint_side mismatch\n";
    std::vector<double> mm;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto& s = samples[i];
        std::cout << i << ' ' << s.forward_side << ' ' << s.adjoint_side << ' ' << s.mismatch
                  << '\n';
        mm.push_back(s.mismatch);
    }
    std::sort(mm.begin(), mm.end());
    const std::size_t n = mm.size();
    const double median = n % 2 ? mm[n / 2] : 0.5 * (mm[n / 2 - 1] + mm[n / 2]);
    std::cout << "median_mismatch " << median << "\nmax_mismatch " << mm.back() << '\n';
}

void cmd_compare(const RunConfig& c) {
    const Mesh coarse = base_mesh(c);
    const Mesh fine = data_mesh(c, coarse);
    const PatProblem fp = problem_for(c, coarse, MeasurementModel::fabry_perot);
    const PatProblem ideal = problem_for(c, coarse, MeasurementModel::idealized);
    const Measurement data =
        synthesize_data(fp, fine, c.medium, make_phantom(c, fine), MeasurementModel::fabry_perot);
    const Field truth = make_phantom(c, coarse);

    const fs::path dir = c.output_dir;
    ensure_dir(dir);
    save_trace(data.trace, dir / "data.trace", "fabry_perot");
    save_field(truth, dir / "truth.field");
    save_field_pgm(truth, coarse, c.image_resolution, dir / "truth.pgm");

    std::ofstream summary(dir / "compare.txt");
    summary << std::setprecision(17);
    for (const PatProblem* pb : {&fp, &ideal}) {
        const std::string name = to_string(pb->model);
        const ReconReport r = landweber(*pb, data, landweber_options(c), &truth);
        write_report(r, dir / name);
        save_field(r.result, dir / name / "result.field");
        save_field_pgm(r.result, coarse, c.image_resolution, dir / (name + ".pgm"));
        save_field_pgm(r.result - truth, coarse, c.image_resolution, dir / (name + "_error.pgm"));
        summary << name << "_relative_error = " << r.error_history.back() << '\n';
        print_summary(name, r);
    }
    if (!summary) {
        throw IoError("cannot write " + (dir / "compare.txt").string());
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Photoacoustic tomography with a Fabry-Perot sensor model"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--config", g.config_path, "key = value configuration file");
    app.add_option("--set", g.overrides, "extra `key = value` line, applied after --config");
    app.add_flag("--deterministic", g.deterministic,
                 "fixed reduction order (always the case in this build)");
    app.add_flag("--discrete-adjoint", g.discrete_adjoint,
                 "use the exact transpose of the discrete forward map");

    std::string out;
    std::string input;
    std::string pgm;
    double step = 0.1;
    int pairs = 20;

    auto* mesh = app.add_subcommand("mesh", "write the disk mesh");
    mesh->add_option("-o,--output", out, "patmesh file")->required();
    auto* phantom = app.add_subcommand("phantom", "sample the phantom on the mesh");
    phantom->add_option("-o,--output", out, "patfield file")->required();
    phantom->add_option("--pgm", pgm, "also write an image");
    auto* forward = app.add_subcommand("forward", "simulate a measurement trace");
    forward->add_option("-o,--output", out, "pattrace file")->required();
    forward->add_option("-i,--input", input, "initial pressure (default: configured phantom)");
    auto* recon = app.add_subcommand("reconstruct", "Landweber reconstruction from `data`");
    auto* dir = app.add_subcommand("directivity", "directivity table");
    dir->add_option("--step", step, "angle step in degrees")->check(CLI::PositiveNumber);
    auto* adj = app.add_subcommand("adjoint-test", "dot-product test of the adjoint");
    adj->add_option("--pairs", pairs, "random pairs")->check(CLI::PositiveNumber);
    auto* compare =
        app.add_subcommand("compare", "reconstruct fine-mesh data under both sensor models");
    auto* dump = app.add_subcommand("dump-config", "print the resolved configuration");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return config_error;
    }

    try {
        const RunConfig c = resolve_config(g);
        std::cout << std::setprecision(17);
        if (*mesh) {
            cmd_mesh(c, out);
        } else if (*phantom) {
            cmd_phantom(c, out, pgm);
        } else if (*forward) {
            cmd_forward(c, input, out);
        } else if (*recon) {
            cmd_reconstruct(c);
        } else if (*dir) {
            cmd_directivity(c, step);
        } else if (*adj) {
            cmd_adjoint_test(c, pairs);
        } else if (*compare) {
            cmd_compare(c);
        } else if (*dump) {
            dump_config(std::cout, c);
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return config_error;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return numerical_error;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << '\n';
        return io_error;
    }
    return ok;
}
