#pragma once

#include "pat/assembly.hpp"
#include "pat/common.hpp"

#include <Eigen/SparseCholesky>

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace pat {

/// Time series of a scalar on the boundary loop: row n is time n*dt, column j
/// is loop node j.
struct BoundaryTrace {
    double dt = 0.0;
    Eigen::MatrixXd values;

    int samples() const { return static_cast<int>(values.rows()); }
    int nodes() const { return static_cast<int>(values.cols()); }
    double time(int n) const { return n * dt; }
    double final_time() const { return (samples() - 1) * dt; }
};

struct WaveRunConfig {
    double dt = 0.0;
    double T = 0.0;
    int snapshot_every = 0;  ///< store interior snapshots every k steps; 0 disables

    /// floor(T / dt), tolerant of T being an exact multiple of dt up to rounding.
    int steps() const;
    int samples() const { return steps() + 1; }
    void validate() const;
};

/// dt = T / ceil(T / dt_max), so that T is an integer number of steps.
WaveRunConfig make_run_config(double T, double dt_max);

struct ForwardSolution {
    BoundaryTrace trace;
    std::vector<double> energy;  ///< discrete energy at half steps n + 1/2
    std::vector<std::pair<int, Field>> snapshots;
};

struct AdjointSolution {
    Field xi_dot0;
    Field xi0;
};

/// Central-difference time stepping of the damped semi-discrete system
///   M p'' + C p' + (A + G) p = 0
/// with the damping term treated implicitly through (M + dt/2 C). Holds the
/// factorizations for one time step size; safe to share read-only.
class WaveSolver {
public:
    /// Throws NumericalError when `cfg.dt` exceeds `stable_dt` (pass
    /// `stable_dt_bound(...)`) or a factorization fails.
    WaveSolver(SystemMatrices mats, std::vector<int> boundary_loop, double rho_b, WaveRunConfig cfg,
               double stable_dt);

    const SystemMatrices& matrices() const { return mats_; }
    const WaveRunConfig& config() const { return cfg_; }
    const std::vector<int>& boundary_loop() const { return loop_; }
    const std::vector<int>& interior() const { return interior_; }
    int num_vertices() const { return static_cast<int>(mats_.M.rows()); }

    /// p(0) = p0 and dp/dt(0) = -p1. p0 must vanish on the boundary.
    ForwardSolution solve_forward(const Field& p0, const Field& p1) const;

    /// Backward problem with zero Cauchy data at t = T and boundary source
    ///   rho_b dn xi - rho (c_b^-1 dt - H) xi = phi.
    /// Returns (dxi/dt(0), xi(0)).
    AdjointSolution solve_adjoint_ibvp(const BoundaryTrace& phi) const;

    /// Exact transpose of the map (p0, p1) -> boundary rows of p^n. `seeds`
    /// holds one row per time sample in loop order. Returns Euclidean
    /// gradients with respect to p0 and p1.
    std::pair<Field, Field> forward_transpose(const Eigen::MatrixXd& seeds) const;

    /// M-orthogonal projection onto fields vanishing on the boundary.
    Field project_h10(const Field& f) const;
    /// Solves M_II x_I = r_I and embeds with zero boundary values.
    Field solve_interior_mass(const Field& r) const;
    Field solve_mass(const Field& r) const;

    double mass_inner(const Field& u, const Field& v) const { return u.dot(mats_.M * v); }

private:
    void check_trace(const BoundaryTrace& trace) const;

    SystemMatrices mats_;
    std::vector<int> loop_;
    std::vector<int> interior_;
    double rho_b_;
    WaveRunConfig cfg_;
    SparseMatrix K_;  // A + G
    SparseMatrix D_;  // M + dt/2 C
    SparseMatrix E_;  // M - dt/2 C
    SparseMatrix M_interior_;
    std::shared_ptr<Eigen::SimplicialLDLT<SparseMatrix>> mass_solver_;
    std::shared_ptr<Eigen::SimplicialLDLT<SparseMatrix>> step_solver_;
    std::shared_ptr<Eigen::SimplicialLDLT<SparseMatrix>> interior_solver_;
};

// "pattrace 1" text format. An optional `# model <name>` comment is written
// when `model` is non-empty and returned by read_trace.
void write_trace(std::ostream& out, const BoundaryTrace& trace, const std::string& model = {});
BoundaryTrace read_trace(std::istream& in, std::string* model = nullptr);
void save_trace(const BoundaryTrace& trace, const std::filesystem::path& path,
                const std::string& model = {});
BoundaryTrace load_trace(const std::filesystem::path& path, std::string* model = nullptr);

}  // namespace pat
