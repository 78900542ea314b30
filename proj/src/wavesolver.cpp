#include "pat/wavesolver.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace pat {

namespace {

std::shared_ptr<Eigen::SimplicialLDLT<SparseMatrix>> factorize(const SparseMatrix& m,
                                                              const char* what) {
    auto solver = std::make_shared<Eigen::SimplicialLDLT<SparseMatrix>>(m);
    if (solver->info() != Eigen::Success) {
        throw NumericalError(std::string("factorization of ") + what + " failed");
    }
    return solver;
}

SparseMatrix principal_submatrix(const SparseMatrix& m, const std::vector<int>& keep) {
    std::vector<int> position(m.rows(), -1);
    for (std::size_t i = 0; i < keep.size(); ++i) {
        position[keep[i]] = static_cast<int>(i);
    }
    std::vector<Eigen::Triplet<double>> triplets;
    for (int col = 0; col < m.outerSize(); ++col) {
        if (position[col] < 0) {
            continue;
        }
        for (SparseMatrix::InnerIterator it(m, col); it; ++it) {
            if (position[it.row()] >= 0) {
                triplets.emplace_back(position[it.row()], position[col], it.value());
            }
        }
    }
    const int n = static_cast<int>(keep.size());
    SparseMatrix out(n, n);
    out.setFromTriplets(triplets.begin(), triplets.end());
    return out;
}

void require_finite(const Field& v, int step) {
    if (!v.allFinite()) {
        throw NumericalError("non-finite wave field at step " + std::to_string(step));
    }
}

}  // namespace

int WaveRunConfig::steps() const {
    return static_cast<int>(std::floor(T / dt * (1.0 + 1e-12) + 1e-9));
}

void WaveRunConfig::validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw ConfigError("time step must be positive");
    }
    if (!(T >= dt) || !std::isfinite(T)) {
        throw ConfigError("final time must be at least one time step");
    }
    if (snapshot_every < 0) {
        throw ConfigError("snapshot interval must be nonnegative");
    }
}

WaveRunConfig make_run_config(double T, double dt_max) {
    if (!(T > 0.0) || !(dt_max > 0.0)) {
        throw ConfigError("final time and time step must be positive");
    }
    const double n = std::ceil(T / dt_max * (1.0 - 1e-12));
    WaveRunConfig cfg;
    cfg.T = T;
    cfg.dt = T / std::max(n, 1.0);
    return cfg;
}

WaveSolver::WaveSolver(SystemMatrices mats, std::vector<int> boundary_loop, double rho_b,
                       WaveRunConfig cfg, double stable_dt)
    : mats_(std::move(mats)), loop_(std::move(boundary_loop)), rho_b_(rho_b), cfg_(cfg) {
    cfg_.validate();
    if (cfg_.dt > stable_dt) {
        throw NumericalError("CFL violation: dt = " + std::to_string(cfg_.dt) +
                             " exceeds the stable bound " + std::to_string(stable_dt));
    }
    const int n = static_cast<int>(mats_.M.rows());
    std::vector<bool> on_boundary(n, false);
    for (int v : loop_) {
        on_boundary.at(v) = true;
    }
    for (int v = 0; v < n; ++v) {
        if (!on_boundary[v]) {
            interior_.push_back(v);
        }
    }
    K_ = mats_.A + mats_.G;
    D_ = mats_.M + (0.5 * cfg_.dt) * mats_.C;
    E_ = mats_.M - (0.5 * cfg_.dt) * mats_.C;
    M_interior_ = principal_submatrix(mats_.M, interior_);
    mass_solver_ = factorize(mats_.M, "mass matrix");
    step_solver_ = factorize(D_, "step matrix");
    interior_solver_ = factorize(M_interior_, "interior mass matrix");
}

ForwardSolution WaveSolver::solve_forward(const Field& p0, const Field& p1) const {
    const int n = num_vertices();
    if (p0.size() != n || p1.size() != n) {
        throw ConfigError("initial data size does not match the mesh");
    }
    for (int v : loop_) {
        if (std::abs(p0[v]) > 1e-12) {
            throw ConfigError("initial pressure must vanish on the boundary (node " +
                              std::to_string(v) + " has " + std::to_string(p0[v]) + ")");
        }
    }
    const double dt = cfg_.dt;
    const int steps = cfg_.steps();
    const int nb = static_cast<int>(loop_.size());

    ForwardSolution out;
    out.trace.dt = dt;
    out.trace.values.resize(steps + 1, nb);
    auto record = [&](int step, const Field& p) {
        for (int j = 0; j < nb; ++j) {
            out.trace.values(step, j) = p[loop_[j]];
        }
        if (cfg_.snapshot_every > 0 && step % cfg_.snapshot_every == 0) {
            out.snapshots.emplace_back(step, p);
        }
    };
    auto energy = [&](const Field& next, const Field& cur) {
        const Field velocity = (next - cur) / dt;
        return 0.5 * velocity.dot(mats_.M * velocity) + 0.5 * next.dot(K_ * cur);
    };

    Field prev = p0;
    record(0, prev);
    // Taylor step with dp/dt(0) = -p1 and M p''(0) = -C p'(0) - K p(0)
    const Field v0 = -p1;
    const Field accel = mass_solver_->solve(Field(-(mats_.C * v0) - K_ * p0));
    Field cur = p0 + dt * v0 + (0.5 * dt * dt) * accel;
    require_finite(cur, 1);
    record(1, cur);
    out.energy.push_back(energy(cur, prev));

    Field next(n);
    for (int step = 1; step < steps; ++step) {
        const Field rhs = 2.0 * (mats_.M * cur) - E_ * prev - (dt * dt) * (K_ * cur);
        next = step_solver_->solve(rhs);
        require_finite(next, step + 1);
        record(step + 1, next);
        out.energy.push_back(energy(next, cur));
        prev.swap(cur);
        cur.swap(next);
    }
    return out;
}

void WaveSolver::check_trace(const BoundaryTrace& trace) const {
    if (trace.samples() != cfg_.samples() || trace.nodes() != static_cast<int>(loop_.size())) {
        throw ConfigError("trace grid (" + std::to_string(trace.samples()) + " x " +
                          std::to_string(trace.nodes()) + ") does not match the run (" +
                          std::to_string(cfg_.samples()) + " x " + std::to_string(loop_.size()) +
                          ")");
    }
    if (std::abs(trace.dt - cfg_.dt) > 1e-12 * cfg_.dt) {
        throw ConfigError("trace time step does not match the run");
    }
}

AdjointSolution WaveSolver::solve_adjoint_ibvp(const BoundaryTrace& phi) const {
    check_trace(phi);
    const int n = num_vertices();
    const double dt = cfg_.dt;
    const int steps = cfg_.steps();
    const int nb = static_cast<int>(loop_.size());

    // marched in reversed time tau = T - t; u^j is xi at t = T - j dt
    Field embedded = Field::Zero(n);
    auto load = [&](int j) {
        const int row = steps - j;
        for (int k = 0; k < nb; ++k) {
            embedded[loop_[k]] = phi.values(row, k);
        }
        return Field((mats_.B_gamma * embedded) / rho_b_);
    };

    Field prev = Field::Zero(n);
    Field cur = (0.5 * dt * dt) * mass_solver_->solve(load(0));
    Field next(n);
    for (int j = 1; j < steps; ++j) {
        const Field rhs =
            2.0 * (mats_.M * cur) - E_ * prev - (dt * dt) * (K_ * cur) + (dt * dt) * load(j);
        next = step_solver_->solve(rhs);
        require_finite(next, j + 1);
        prev.swap(cur);
        cur.swap(next);
    }
    // second-order velocity at tau = T from u'' = M^-1 (f - K u - C u')
    const Field rhs = mats_.M * (cur - prev) / dt + (0.5 * dt) * (load(steps) - K_ * cur);
    const Field velocity = step_solver_->solve(rhs);

    AdjointSolution out;
    out.xi0 = cur;
    out.xi_dot0 = -velocity;
    return out;
}

std::pair<Field, Field> WaveSolver::forward_transpose(const Eigen::MatrixXd& seeds) const {
    const int n = num_vertices();
    const int steps = cfg_.steps();
    const int nb = static_cast<int>(loop_.size());
    if (seeds.rows() != steps + 1 || seeds.cols() != nb) {
        throw ConfigError("seed grid does not match the run");
    }
    const double dt = cfg_.dt;
    auto seed = [&](int step) {
        Field g = Field::Zero(n);
        if (step >= 0) {
            for (int k = 0; k < nb; ++k) {
                g[loop_[k]] = seeds(step, k);
            }
        }
        return g;
    };

    // Reverse sweep over p^{k+1} = D^-1 (2 M p^k - E p^{k-1} - dt^2 K p^k).
    // lam_next holds the complete adjoint of p^{k+1}; lam_cur and lam_prev
    // are partial adjoints of p^k and p^{k-1}.
    Field lam_next = seed(steps);
    Field lam_cur = seed(steps - 1);
    Field lam_prev = seed(steps - 2);
    for (int k = steps - 1; k >= 1; --k) {
        const Field u = step_solver_->solve(lam_next);
        lam_cur += 2.0 * (mats_.M * u) - (dt * dt) * (K_ * u);
        lam_prev -= E_ * u;
        lam_next.swap(lam_cur);
        lam_cur.swap(lam_prev);
        lam_prev = seed(k - 2);
    }
    // lam_next = adjoint of p^1, lam_cur = adjoint of p^0.
    // p^1 = p0 - dt p1 - dt^2/2 M^-1 (K p0 - C p1)
    const Field w = mass_solver_->solve(lam_next);
    Field grad_p0 = lam_cur + lam_next - (0.5 * dt * dt) * (K_ * w);
    Field grad_p1 = -dt * lam_next + (0.5 * dt * dt) * (mats_.C * w);
    return {std::move(grad_p0), std::move(grad_p1)};
}

Field WaveSolver::solve_interior_mass(const Field& r) const {
    Field rhs(static_cast<int>(interior_.size()));
    for (std::size_t i = 0; i < interior_.size(); ++i) {
        rhs[static_cast<int>(i)] = r[interior_[i]];
    }
    const Field x = interior_solver_->solve(rhs);
    Field out = Field::Zero(num_vertices());
    for (std::size_t i = 0; i < interior_.size(); ++i) {
        out[interior_[i]] = x[static_cast<int>(i)];
    }
    return out;
}

Field WaveSolver::project_h10(const Field& f) const { return solve_interior_mass(mats_.M * f); }

Field WaveSolver::solve_mass(const Field& r) const { return mass_solver_->solve(r); }

// ---------------------------------------------------------------------------
// pattrace 1

void write_trace(std::ostream& out, const BoundaryTrace& trace, const std::string& model) {
    out << "pattrace 1\n" << std::setprecision(17);
    out << "dt " << trace.dt << " steps " << trace.samples() << " nodes " << trace.nodes() << '\n';
    if (!model.empty()) {
        out << "# model " << model << '\n';
    }
    for (int n = 0; n < trace.samples(); ++n) {
        for (int j = 0; j < trace.nodes(); ++j) {
            if (j > 0) {
                out << ' ';
            }
            out << trace.values(n, j);
        }
        out << '\n';
    }
}

BoundaryTrace read_trace(std::istream& in, std::string* model) {
    int line_no = 0;
    std::string line;
    auto fail = [&](const std::string& what) -> void {
        throw IoError("line " + std::to_string(line_no) + ": " + what);
    };
    // returns false at end of input; records `# model` comments
    auto next = [&](std::istringstream& fields) {
        while (std::getline(in, line)) {
            ++line_no;
            if (auto hash = line.find('#'); hash != std::string::npos) {
                std::istringstream comment(line.substr(hash + 1));
                std::string key, value;
                if (model && comment >> key >> value && key == "model") {
                    *model = value;
                }
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
    };

    std::istringstream fields;
    std::string word;
    int version = 0;
    if (!next(fields) || !(fields >> word >> version) || word != "pattrace" || version != 1) {
        fail("malformed header, expected 'pattrace 1'");
    }
    std::string k_dt, k_steps, k_nodes;
    BoundaryTrace trace;
    long samples = 0;
    long nodes = 0;
    if (!next(fields) || !(fields >> k_dt >> trace.dt >> k_steps >> samples >> k_nodes >> nodes) ||
        k_dt != "dt" || k_steps != "steps" || k_nodes != "nodes") {
        fail("malformed size line, expected 'dt <value> steps <N> nodes <B>'");
    }
    if (!(trace.dt > 0.0) || samples < 1 || nodes < 1) {
        fail("nonpositive dt, steps or nodes");
    }
    trace.values.resize(samples, nodes);
    for (long n = 0; n < samples; ++n) {
        if (!next(fields)) {
            fail("unexpected end of file: expected " + std::to_string(samples) + " rows");
        }
        for (long j = 0; j < nodes; ++j) {
            if (!(fields >> trace.values(n, j))) {
                fail("expected " + std::to_string(nodes) + " values");
            }
        }
        if (fields >> word) {
            fail("too many values in row");
        }
    }
    if (next(fields)) {
        fail("unexpected content after the last row");
    }
    return trace;
}

void save_trace(const BoundaryTrace& trace, const std::filesystem::path& path,
                const std::string& model) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    write_trace(out, trace, model);
    if (!out) {
        throw IoError("write to " + path.string() + " failed");
    }
}

BoundaryTrace load_trace(const std::filesystem::path& path, std::string* model) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    try {
        return read_trace(in, model);
    } catch (const IoError& e) {
        throw IoError(path.string() + ": " + e.what());
    }
}

}  // namespace pat
