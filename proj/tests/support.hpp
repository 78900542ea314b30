#pragma once

#include "pat/mesh.hpp"

#include <cmath>
#include <vector>

namespace pat::test {

// Fan of a regular n-gon inscribed in the unit circle, centre vertex 0.
inline Mesh polygon_fan(int n) {
    std::vector<Point> v{{0.0, 0.0}};
    std::vector<Triangle> t;
    std::vector<int> loop;
    for (int i = 0; i < n; ++i) {
        const double a = 2.0 * M_PI * i / n;
        v.emplace_back(std::cos(a), std::sin(a));
        loop.push_back(i + 1);
        t.push_back({0, i + 1, (i + 1) % n + 1});
    }
    return Mesh::create(v, t, loop, 1.0);
}

inline double max_abs(const Eigen::MatrixXd& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

}  // namespace pat::test
