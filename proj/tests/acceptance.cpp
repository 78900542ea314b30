// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include "pat/directivity.hpp"
#include "pat/image.hpp"
#include "pat/inversion.hpp"
#include "pat/phantoms.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace pat;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

struct Criterion {
    int id;
    std::string name;
    double budget_s;
    std::function<Outcome()> run;
};

std::string fmt(double v) {
    std::ostringstream s;
    s << std::setprecision(6) << v;
    return s.str();
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

Outcome critical_angle_check() {
    const auto z = directivity_zero(water_parylene_polycarbonate());
    if (!z) {
        return {false, "no zero crossing"};
    }
    return {std::abs(*z - 42.99) <= 0.01, "zero crossing " + fmt(*z) + " deg"};
}

Outcome endpoints_check() {
    const MediumParams p = default_nondimensional_medium();
    const double d0 = directivity(0.0, p);
    const double d90 = directivity(90.0, p);
    int changes = 0;
    double prev = d0;
    for (int i = 1; i < 9000; ++i) {
        const double d = directivity(i * 0.01, p);
        if ((d > 0.0) != (prev > 0.0)) {
            ++changes;
        }
        prev = d;
    }
    const bool ok = std::abs(d0 - 1.2633) <= 1e-3 && d90 == 0.0 && changes == 1;
    return {ok, "D(0) " + fmt(d0) + ", D(90) " + fmt(d90) + ", sign changes " +
                    std::to_string(changes)};
}

PatProblem problem(int level, MeasurementModel model = MeasurementModel::fabry_perot) {
    return make_problem(generate_disk_mesh(level), default_nondimensional_medium(), model,
                        DiscretizationOptions{});
}

Outcome adjoint_check() {
    auto mismatches = [](const PatProblem& pb, AdjointKind kind) {
        std::vector<double> m;
        for (const auto& s : dot_product_study(pb, 20, 7, kind)) {
            m.push_back(s.mismatch);
        }
        return m;
    };
    const PatProblem l1 = problem(1);
    const PatProblem l2 = problem(2);
    const double m1 = median(mismatches(l1, AdjointKind::continuous));
    const double m2 = median(mismatches(l2, AdjointKind::continuous));
    const auto d = mismatches(l1, AdjointKind::discrete);
    const double dmax = *std::max_element(d.begin(), d.end());
    const bool ok = m1 < 5e-2 && m2 < m1 && dmax < 1e-10;
    return {ok, "median level 1 " + fmt(m1) + " (< 0.05), level 2 " + fmt(m2) +
                    ", discrete max " + fmt(dmax) + " (< 1e-10)"};
}

Outcome energy_check() {
    const PatProblem pb = problem(3);
    double worst = 0.0;
    bool ok = true;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        std::mt19937_64 rng(seed);
        const Field p0 = random_smooth_field(pb.mesh, rng, true);
        const Field p1 = random_smooth_field(pb.mesh, rng, false);
        const std::vector<double> e = pb.solver->solve_forward(p0, p1).energy;
        for (std::size_t n = 1; n < e.size(); ++n) {
            const double rise = (e[n] - e[n - 1]) / e[0];
            worst = std::max(worst, rise);
            ok = ok && rise <= 1e-6;
        }
    }
    return {ok, "largest relative step increase " + fmt(worst)};
}

struct Recon {
    ReconReport fp;
    ReconReport ideal;
};

// Data from a mesh one level finer, reconstructed on `level`.
Recon reconstruct(int level, bool with_idealized) {
    const Mesh coarse = generate_disk_mesh(level);
    const Mesh fine = generate_disk_mesh(level + 1);
    const MediumParams params = default_nondimensional_medium();
    const PatProblem fp = make_problem(coarse, params, MeasurementModel::fabry_perot, {});
    const Measurement data = synthesize_data(fp, fine, params, shepp_logan(fine));
    const Field truth = shepp_logan(coarse);
    LandweberOptions o;
    o.iterations = 60;
    Recon r;
    r.fp = landweber(fp, data, o, &truth);
    if (with_idealized) {
        const PatProblem id = make_problem(coarse, params, MeasurementModel::idealized, {});
        r.ideal = landweber(id, data, o, &truth);
    }
    return r;
}

Outcome landweber_check() {
    const Recon a = reconstruct(2, false);
    const Recon b = reconstruct(3, false);
    bool monotone = true;
    for (const auto* h : {&a.fp.error_history, &b.fp.error_history}) {
        for (int k = 1; k <= 10; ++k) {
            monotone = monotone && (*h)[k] < (*h)[k - 1];
        }
    }
    const double ea = a.fp.error_history.back();
    const double eb = b.fp.error_history.back();
    return {monotone && eb < ea, std::string("first 10 monotone ") + (monotone ? "yes" : "no") +
                                     ", final error level 2 " + fmt(ea) + ", level 3 " + fmt(eb)};
}

Outcome model_mismatch_check() {
    const Recon r = reconstruct(3, true);
    const double fp = r.fp.error_history.back();
    const double id = r.ideal.error_history.back();
    return {fp <= id / 5.0, "Fabry-Perot " + fmt(fp) + ", idealized " + fmt(id) + ", ratio " +
                                fmt(id / fp)};
}

// max error of the measurement of sin(w t) cos(k s) on the n-gon against
// p + c_s^2 k^2 (w t - sin w t) / w^2 cos(k s)
double eigen_error(int n, int steps) {
    std::vector<Point> v{{0.0, 0.0}};
    std::vector<Triangle> tris;
    std::vector<int> loop;
    for (int i = 0; i < n; ++i) {
        v.emplace_back(std::cos(2.0 * M_PI * i / n), std::sin(2.0 * M_PI * i / n));
        loop.push_back(i + 1);
        tris.push_back({0, i + 1, (i + 1) % n + 1});
    }
    const BoundaryOperators ops(Mesh::create(v, tris, loop, 1.0));
    MediumParams p = default_nondimensional_medium();
    p.H = 0.0;
    const SensorCoefficients c = sensor_coefficients(p);
    const double w = 3.0;
    const int k = 2;
    BoundaryTrace tr;
    tr.dt = 1.0 / steps;
    tr.values.resize(steps + 1, n);
    Eigen::MatrixXd expected(steps + 1, n);
    for (int i = 0; i <= steps; ++i) {
        const double t = i * tr.dt;
        for (int j = 0; j < n; ++j) {
            const double ck = std::cos(k * 2.0 * M_PI * j / n);
            tr.values(i, j) = std::sin(w * t) * ck;
            expected(i, j) = tr.values(i, j) + c.cs2 * k * k * (w * t - std::sin(w * t)) / (w * w) * ck;
        }
    }
    return (measure_fabry_perot(tr, c, ops).trace.values - expected).cwiseAbs().maxCoeff();
}

Outcome eigenfunction_check() {
    const double e1 = eigen_error(48, 100);
    const double e2 = eigen_error(96, 200);
    return {e1 / e2 >= 3.5, "error " + fmt(e1) + " -> " + fmt(e2) + ", reduction " + fmt(e1 / e2)};
}

Outcome format_check() {
    const Mesh m = generate_disk_mesh(2);
    std::ostringstream ms;
    write_mesh(ms, m);
    std::istringstream mi(ms.str());
    const Mesh mb = read_mesh(mi);
    std::ostringstream ms2;
    write_mesh(ms2, mb);
    const bool mesh_ok = mb == m && ms2.str() == ms.str();

    std::mt19937_64 rng(3);
    const Field f = random_smooth_field(m, rng, false) * 1e-7 + shepp_logan(m);
    std::ostringstream fs;
    write_field(fs, f);
    std::istringstream fi(fs.str());
    const Field fb = read_field(fi);
    const bool field_ok = (fb.array() == f.array()).all();

    const BoundaryTrace t = random_smooth_trace(m, 17, 1.0 / 7.0, rng);
    std::ostringstream ts;
    write_trace(ts, t, "fabry_perot");
    std::istringstream ti(ts.str());
    std::string model;
    const BoundaryTrace tb = read_trace(ti, &model);
    const bool trace_ok =
        tb.dt == t.dt && (tb.values.array() == t.values.array()).all() && model == "fabry_perot";

    const std::string img = render_field_pgm(f, m, 64);
    const bool pgm_ok = img.rfind("P5\n64 64\n255\n", 0) == 0 && img.size() == 13 + 64 * 64;
    auto yn = [](bool b) { return b ? "ok" : "BAD"; };
    return {mesh_ok && field_ok && trace_ok && pgm_ok,
            std::string("mesh ") + yn(mesh_ok) + ", field " + yn(field_ok) + ", trace " +
                yn(trace_ok) + ", pgm header " + yn(pgm_ok)};
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "critical angle", 1.0, critical_angle_check},
        {2, "directivity endpoints", 1.0, endpoints_check},
        {3, "adjoint consistency", 120.0, adjoint_check},
        {4, "energy dissipation", 60.0, energy_check},
        {5, "Landweber behavior", 600.0, landweber_check},
        {6, "model mismatch", 900.0, model_mismatch_check},
        {7, "eigenfunction oracle", 60.0, eigenfunction_check},
        {8, "format fidelity", 1.0, format_check},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o{false, ""};
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time = secs < c.budget_s;
        const bool pass = o.pass && in_time;
        failed += pass ? 0 : 1;
        std::cout << (pass ? "PASS" : "FAIL") << " criterion " << c.id << " (" << c.name
                  << "): " << o.detail << "; " << std::fixed << std::setprecision(2) << secs
                  << " s of " << c.budget_s << " s" << (in_time ? "" : " (over budget)")
                  << std::defaultfloat << '\n'
                  << std::flush;
    }
    std::cout << (criteria.size() - failed) << " of " << criteria.size() << " criteria passed\n";
    return failed == 0 ? 0 : 1;
}
