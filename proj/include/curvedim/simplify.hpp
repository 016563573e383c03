#pragma once

#include <algorithm>
#include <limits>
#include <vector>

#include "curvedim/frechet.hpp"
#include "curvedim/geometry.hpp"

namespace curvedim {

// Shortcut graph for vertex-restricted simplification: edge (i, j), i < j,
// weighted with d_F(c[i..j], segment(v_i, v_j)). Indices 1-based.
struct SimplificationGraph {
    std::size_t n_vertices = 0;
    std::vector<double> w;  // n x n, row-major, 0-based storage

    double weight(std::size_t i, std::size_t j) const { return w[(i - 1) * n_vertices + (j - 1)]; }
};

inline SimplificationGraph build_simplification_graph(const Curve& c) {
    const std::size_t n = c.size();
    SimplificationGraph g;
    g.n_vertices = n;
    g.w.assign(n * n, 0.0);
    for (std::size_t i = 1; i <= n; ++i) {
        for (std::size_t j = i + 1; j <= n; ++j) {
            double weight = 0.0;
            if (j > i + 1) {
                const Curve part = subcurve(c, i, j);
                const Curve chord =
                    Curve::unchecked({c.vertex(i - 1), c.vertex(j - 1)}, c.id());
                weight = frechet_distance(part, chord);
            }
            g.w[(i - 1) * n + (j - 1)] = weight;
        }
    }
    return g;
}

struct BottleneckPath {
    std::vector<std::size_t> path;  // 1-based vertex indices, starts at 1, ends at n
    double cost = 0.0;
};

namespace detail {

// Min hop count from vertex 1 to every vertex using shortcut edges of weight
// <= w_max; returns n+1 where unreachable within any hops.
inline std::vector<std::size_t> hops_from_start(const SimplificationGraph& g, double w_max) {
    const std::size_t n = g.n_vertices;
    const std::size_t inf = n + 1;
    std::vector<std::size_t> h(n + 1, inf);
    h[1] = 0;
    for (std::size_t j = 2; j <= n; ++j)
        for (std::size_t i = 1; i < j; ++i)
            if (h[i] != inf && g.weight(i, j) <= w_max) h[j] = std::min(h[j], h[i] + 1);
    return h;
}

inline std::vector<std::size_t> hops_to_end(const SimplificationGraph& g, double w_max) {
    const std::size_t n = g.n_vertices;
    const std::size_t inf = n + 1;
    std::vector<std::size_t> h(n + 1, inf);
    h[n] = 0;
    for (std::size_t k = 1; k < n; ++k) {
        const std::size_t i = n - k;
        for (std::size_t j = i + 1; j <= n; ++j)
            if (h[j] != inf && g.weight(i, j) <= w_max) h[i] = std::min(h[i], h[j] + 1);
    }
    return h;
}

}  // namespace detail

// Bottleneck-optimal path from vertex 1 to vertex n using at most ell
// vertices: binary search over the sorted distinct edge weights with a hop
// bounded reachability check. Ties broken toward fewer vertices, then the
// lexicographically smallest index sequence.
inline BottleneckPath min_bottleneck_path(const SimplificationGraph& g, std::size_t ell) {
    if (ell < 2) throw ParamOutOfRange("min_bottleneck_path: ell must be >= 2");
    const std::size_t n = g.n_vertices;
    const std::size_t max_hops = std::min(ell, n) - 1;

    std::vector<double> weights;
    for (std::size_t i = 1; i <= n; ++i)
        for (std::size_t j = i + 1; j <= n; ++j) weights.push_back(g.weight(i, j));
    std::sort(weights.begin(), weights.end());
    weights.erase(std::unique(weights.begin(), weights.end()), weights.end());

    std::size_t lo = 0, hi = weights.size() - 1;
    while (lo < hi) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (detail::hops_from_start(g, weights[mid])[n] <= max_hops)
            hi = mid;
        else
            lo = mid + 1;
    }
    const double cost = weights[lo];

    // Fewest vertices, then lexicographic: greedily take the smallest next
    // index that can still reach n within the remaining hop budget.
    const std::vector<std::size_t> to_end = detail::hops_to_end(g, cost);
    std::size_t budget = to_end[1];
    BottleneckPath out;
    out.cost = cost;
    out.path.push_back(1);
    std::size_t cur = 1;
    while (cur != n) {
        for (std::size_t next = cur + 1; next <= n; ++next) {
            if (g.weight(cur, next) <= cost && to_end[next] + 1 <= budget) {
                out.path.push_back(next);
                cur = next;
                budget = to_end[next];
                break;
            }
        }
    }
    return out;
}

struct SimplificationResult {
    Curve curve;
    double cost = 0.0;   // bottleneck cost of the chosen path
    double error = 0.0;  // d_F(input, simplified), computed explicitly
    std::vector<std::size_t> indices;  // 1-based vertex indices kept
};

// Vertex-restricted minimum-bottleneck ell-simplification; 4-approximate
// minimum-error among all curves with ell vertices.
inline SimplificationResult simplify_curve(const Curve& c, std::size_t ell) {
    if (ell < 2) throw ParamOutOfRange("simplify_curve: ell must be >= 2");
    const SimplificationGraph g = build_simplification_graph(c);
    BottleneckPath bp = min_bottleneck_path(g, ell);
    std::vector<Point> pts;
    pts.reserve(bp.path.size());
    for (std::size_t idx : bp.path) pts.push_back(c.vertex(idx - 1));
    SimplificationResult res;
    res.curve = Curve::unchecked(std::move(pts), c.id());
    res.cost = bp.cost;
    res.error = frechet_distance(c, res.curve);
    res.indices = std::move(bp.path);
    return res;
}

}  // namespace curvedim
