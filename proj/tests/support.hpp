#pragma once

// Shared helpers for the test suites: deterministic random curves and points.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "curvedim/geometry.hpp"

namespace testsupport {

inline curvedim::Point random_point(std::mt19937_64& rng, std::size_t d, double scale = 1.0) {
    std::uniform_real_distribution<double> u(-scale, scale);
    curvedim::Point p(d);
    for (double& x : p) x = u(rng);
    return p;
}

// Random walk with steps in [-scale, scale]^d; consecutive duplicates are
// rejected so the result is a valid curve.
inline curvedim::Curve random_curve(std::mt19937_64& rng, std::size_t m, std::size_t d,
                                    double scale = 1.0, const std::string& id = "") {
    std::uniform_real_distribution<double> u(-scale, scale);
    std::vector<curvedim::Point> pts;
    pts.push_back(random_point(rng, d, scale));
    while (pts.size() < m) {
        curvedim::Point p(d);
        for (std::size_t k = 0; k < d; ++k) p[k] = pts.back()[k] + u(rng);
        if (p == pts.back()) continue;
        pts.push_back(std::move(p));
    }
    return curvedim::make_curve(std::move(pts), false, id);
}

}  // namespace testsupport
