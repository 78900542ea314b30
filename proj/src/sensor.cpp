#include "pat/sensor.hpp"

#include <cmath>
#include <vector>

namespace pat {

namespace {

void require_samples(const Eigen::MatrixXd& series) {
    if (series.rows() < 2) {
        throw ConfigError("time series needs at least 2 samples (got " +
                          std::to_string(series.rows()) + ")");
    }
}

Eigen::MatrixXd antiderivative2_forward(const Eigen::MatrixXd& v, double dt) {
    // Q_{n+1} = Q_n + dt R_n,  R_n = dt (v_0 / 2 + v_1 + ... + v_n)
    const Eigen::Index n = v.rows();
    Eigen::MatrixXd q(n, v.cols());
    q.row(0).setZero();
    Eigen::RowVectorXd r = 0.5 * dt * v.row(0);
    for (Eigen::Index k = 0; k + 1 < n; ++k) {
        if (k > 0) {
            r += dt * v.row(k);
        }
        q.row(k + 1) = q.row(k) + dt * r;
    }
    return q;
}

}  // namespace

Eigen::VectorXd trapezoid_weights(int samples, double dt) {
    if (samples < 2) {
        throw ConfigError("trapezoid rule needs at least 2 samples");
    }
    Eigen::VectorXd w = Eigen::VectorXd::Constant(samples, dt);
    w[0] = w[samples - 1] = 0.5 * dt;
    return w;
}

Eigen::MatrixXd antiderivative2(const Eigen::MatrixXd& series, double dt, TimeDirection direction) {
    require_samples(series);
    if (direction == TimeDirection::forward) {
        return antiderivative2_forward(series, dt);
    }
    return antiderivative2_forward(series.colwise().reverse(), dt).colwise().reverse();
}

Eigen::MatrixXd antiderivative2_transpose(const Eigen::MatrixXd& y, double dt) {
    require_samples(y);
    // (J2^T y)_k = dt^2 sum_{n>k} (n - k) y_n, halved for k = 0
    const Eigen::Index n = y.rows();
    Eigen::MatrixXd out(n, y.cols());
    Eigen::RowVectorXd s0 = Eigen::RowVectorXd::Zero(y.cols());
    Eigen::RowVectorXd s1 = Eigen::RowVectorXd::Zero(y.cols());
    for (Eigen::Index k = n - 1; k >= 0; --k) {
        out.row(k) = dt * dt * (s1 - static_cast<double>(k) * s0);
        s0 += y.row(k);
        s1 += static_cast<double>(k) * y.row(k);
    }
    out.row(0) *= 0.5;
    return out;
}

Eigen::MatrixXd time_derivative(const Eigen::MatrixXd& v, double dt) {
    require_samples(v);
    const Eigen::Index n = v.rows();
    Eigen::MatrixXd d(n, v.cols());
    d.row(0) = (v.row(1) - v.row(0)) / dt;
    d.row(n - 1) = (v.row(n - 1) - v.row(n - 2)) / dt;
    if (n > 2) {
        d.middleRows(1, n - 2) = (v.bottomRows(n - 2) - v.topRows(n - 2)) / (2.0 * dt);
    }
    return d;
}

Eigen::MatrixXd time_derivative_transpose(const Eigen::MatrixXd& y, double dt) {
    require_samples(y);
    const Eigen::Index n = y.rows();
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, y.cols());
    out.row(0) -= y.row(0) / dt;
    out.row(1) += y.row(0) / dt;
    out.row(n - 1) += y.row(n - 1) / dt;
    out.row(n - 2) -= y.row(n - 1) / dt;
    for (Eigen::Index k = 1; k + 1 < n; ++k) {
        out.row(k + 1) += y.row(k) / (2.0 * dt);
        out.row(k - 1) -= y.row(k) / (2.0 * dt);
    }
    return out;
}

BoundaryOperators::BoundaryOperators(const Mesh& mesh) {
    const int nb = mesh.num_boundary_nodes();
    if (nb < 3) {
        throw ConfigError("boundary loop needs at least 3 nodes");
    }
    weights_ = Eigen::VectorXd::Zero(nb);
    std::vector<Eigen::Triplet<double>> s;
    for (int i = 0; i < nb; ++i) {
        const int j = (i + 1) % nb;
        const double len = mesh.boundary_edge_lengths()[i];
        weights_[i] += 0.5 * len;
        weights_[j] += 0.5 * len;
        s.emplace_back(i, i, 1.0 / len);
        s.emplace_back(j, j, 1.0 / len);
        s.emplace_back(i, j, -1.0 / len);
        s.emplace_back(j, i, -1.0 / len);
    }
    S_.resize(nb, nb);
    S_.setFromTriplets(s.begin(), s.end());
}

Eigen::MatrixXd BoundaryOperators::laplace_beltrami(const Eigen::MatrixXd& rows) const {
    const Eigen::MatrixXd sp = (S_ * rows.transpose()).transpose();
    return -(sp * weights_.cwiseInverse().asDiagonal());
}

Eigen::MatrixXd BoundaryOperators::stiffness_inverse_mass(const Eigen::MatrixXd& rows) const {
    const Eigen::MatrixXd scaled = rows * weights_.cwiseInverse().asDiagonal();
    return (S_ * scaled.transpose()).transpose();
}

Eigen::MatrixXd BoundaryOperators::apply_weights(const Eigen::MatrixXd& rows) const {
    return rows * weights_.asDiagonal();
}

std::string to_string(MeasurementModel model) {
    return model == MeasurementModel::fabry_perot ? "fabry_perot" : "idealized";
}

MeasurementModel parse_measurement_model(const std::string& name) {
    if (name == "fabry_perot" || name == "fabry-perot") {
        return MeasurementModel::fabry_perot;
    }
    if (name == "idealized") {
        return MeasurementModel::idealized;
    }
    throw ConfigError("unknown measurement model '" + name + "'");
}

Measurement measure_fabry_perot(const BoundaryTrace& p, const SensorCoefficients& coeffs,
                                const BoundaryOperators& ops, double scale) {
    require_samples(p.values);
    if (p.nodes() != ops.nodes()) {
        throw ConfigError("trace has " + std::to_string(p.nodes()) + " columns for " +
                          std::to_string(ops.nodes()) + " boundary nodes");
    }
    if (p.values.row(0).cwiseAbs().maxCoeff() > 1e-12) {
        throw ConfigError("pressure trace must vanish at t = 0");
    }
    const Eigen::MatrixXd source = coeffs.a * time_derivative(p.values, p.dt) +
                                   coeffs.b * p.values -
                                   coeffs.cs2 * ops.laplace_beltrami(p.values);
    Measurement m;
    m.model = MeasurementModel::fabry_perot;
    m.trace.dt = p.dt;
    m.trace.values =
        scale * (p.values + antiderivative2(source, p.dt, TimeDirection::forward));
    return m;
}

Measurement measure_idealized(const BoundaryTrace& p, double scale) {
    Measurement m;
    m.model = MeasurementModel::idealized;
    m.trace.dt = p.dt;
    m.trace.values = scale == 1.0 ? p.values : Eigen::MatrixXd(scale * p.values);
    return m;
}

Eigen::MatrixXd measure_fabry_perot_transpose(const Eigen::MatrixXd& y, double dt,
                                              const SensorCoefficients& coeffs,
                                              const BoundaryOperators& ops, double scale) {
    const Eigen::MatrixXd jt = antiderivative2_transpose(y, dt);
    return scale * (y + coeffs.a * time_derivative_transpose(jt, dt) + coeffs.b * jt +
                    coeffs.cs2 * ops.stiffness_inverse_mass(jt));
}

double data_inner(const BoundaryTrace& u, const BoundaryTrace& v, const BoundaryOperators& ops) {
    if (u.samples() != v.samples() || u.nodes() != v.nodes() || u.nodes() != ops.nodes()) {
        throw ConfigError("data inner product of traces on different grids");
    }
    const Eigen::VectorXd w = trapezoid_weights(u.samples(), u.dt);
    return w.dot(u.values.cwiseProduct(ops.apply_weights(v.values)).rowwise().sum());
}

BoundaryTrace restrict_trace(const BoundaryTrace& fine, const Mesh& fine_mesh, const Mesh& coarse,
                             int time_stride) {
    if (time_stride < 1 || (fine.samples() - 1) % time_stride != 0) {
        throw ConfigError("time stride does not divide the fine trace");
    }
    const auto& fine_loop = fine_mesh.boundary_loop();
    if (fine.nodes() != static_cast<int>(fine_loop.size())) {
        throw ConfigError("fine trace does not match the fine mesh");
    }
    std::vector<int> columns;
    for (int v : coarse.boundary_loop()) {
        const Point& x = coarse.vertices()[v];
        int found = -1;
        for (std::size_t j = 0; j < fine_loop.size(); ++j) {
            if ((fine_mesh.vertices()[fine_loop[j]] - x).norm() < 1e-10) {
                found = static_cast<int>(j);
                break;
            }
        }
        if (found < 0) {
            throw ConfigError("coarse boundary node " + std::to_string(v) +
                              " has no match on the fine mesh");
        }
        columns.push_back(found);
    }
    const int samples = (fine.samples() - 1) / time_stride + 1;
    BoundaryTrace out;
    out.dt = fine.dt * time_stride;
    out.values.resize(samples, static_cast<Eigen::Index>(columns.size()));
    for (int n = 0; n < samples; ++n) {
        for (std::size_t j = 0; j < columns.size(); ++j) {
            out.values(n, static_cast<Eigen::Index>(j)) = fine.values(n * time_stride, columns[j]);
        }
    }
    return out;
}

}  // namespace pat
