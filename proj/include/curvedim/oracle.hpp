#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "curvedim/cluster.hpp"
#include "curvedim/frechet.hpp"
#include "curvedim/geometry.hpp"
#include "curvedim/simplify.hpp"

// Brute-force reference implementations, independent of the main algorithms
// apart from curve_core primitives. Exponential on purpose; every entry point
// enforces a hard instance cap.

namespace curvedim {
namespace oracle {

// Exhaustive min-max over all monotone couplings, plain recursion, no memo.
inline double brute_discrete_frechet(const Curve& a, const Curve& b) {
    require_same_dim(a, b, "brute_discrete_frechet");
    if (a.size() + b.size() > 14) throw CapExceeded("brute_discrete_frechet: |a|+|b| > 14");
    std::function<double(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t j) -> double {
        const double d = dist(a.vertex(i), b.vertex(j));
        if (i == 0 && j == 0) return d;
        double best = std::numeric_limits<double>::infinity();
        if (i > 0) best = std::min(best, rec(i - 1, j));
        if (j > 0) best = std::min(best, rec(i, j - 1));
        if (i > 0 && j > 0) best = std::min(best, rec(i - 1, j - 1));
        return std::max(best, d);
    };
    return rec(a.size() - 1, b.size() - 1);
}

struct OracleBand {
    double lower = 0.0;
    double upper = 0.0;

    bool contains(double v) const { return lower <= v && v <= upper; }
};

namespace detail {

inline Curve resample(const Curve& c, double delta) {
    std::vector<Point> pts;
    pts.push_back(c.vertex(0));
    for (std::size_t e = 0; e + 1 < c.size(); ++e) {
        const Segment s = c.edge(e);
        const double len = dist(s.a, s.b);
        const std::size_t k = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(len / delta)));
        for (std::size_t t = 1; t <= k; ++t)
            pts.push_back(point_on_segment(s, static_cast<double>(t) / static_cast<double>(k)));
    }
    return make_curve(std::move(pts), false, c.id());
}

}  // namespace detail

// Bracket for the continuous Frechet distance: resample both curves with
// vertex spacing <= delta, take the discrete Frechet distance U of the
// result. d_F lies in [max(U - 2*delta, 0), U].
inline OracleBand resampled_frechet_band(const Curve& a, const Curve& b, double delta) {
    if (delta <= 0.0) throw ParamOutOfRange("resampled_frechet_band: delta must be positive");
    const double u = discrete_frechet(detail::resample(a, delta), detail::resample(b, delta));
    return OracleBand{std::max(u - 2.0 * delta, 0.0), u};
}

// All valid sequences for curves with na and nb vertices (cell grid
// (na-1) x (nb-1)), by depth-first search over self-avoiding walks.
inline std::vector<ValidSequence> enumerate_valid_sequences(std::size_t na, std::size_t nb, bool monotone) {
    if (na < 2 || nb < 2) throw ParamOutOfRange("enumerate_valid_sequences: need na, nb >= 2");
    const std::size_t cap = monotone ? 7 : 5;
    if (na > cap || nb > cap) throw CapExceeded("enumerate_valid_sequences: size cap exceeded");
    const std::size_t p = na - 1, q = nb - 1;
    std::vector<ValidSequence> out;
    std::vector<std::pair<std::size_t, std::size_t>> walk;
    std::vector<char> used(p * q, 0);

    std::function<void(std::size_t, std::size_t)> dfs = [&](std::size_t i, std::size_t j) {
        walk.emplace_back(i, j);
        used[(i - 1) * q + (j - 1)] = 1;
        if (i == p && j == q) {
            out.push_back(ValidSequence{walk});
        } else {
            auto step = [&](std::size_t ni, std::size_t nj) {
                if (ni < 1 || ni > p || nj < 1 || nj > q) return;
                if (used[(ni - 1) * q + (nj - 1)]) return;
                dfs(ni, nj);
            };
            step(i, j + 1);
            step(i + 1, j);
            if (!monotone) {
                step(i, j - 1);
                step(i - 1, j);
            }
        }
        used[(i - 1) * q + (j - 1)] = 0;
        walk.pop_back();
    };
    dfs(1, 1);
    return out;
}

// Decision through the predicate system: true iff some enumerated
// (monotone) valid sequence satisfies the full predicate system.
inline bool predicate_oracle_decision(const Curve& a, const Curve& b, double r, bool monotone) {
    if (!eval_predicate(PredicateId::p1(), a, b, r)) return false;
    if (!eval_predicate(PredicateId::p2(), a, b, r)) return false;
    for (const ValidSequence& seq : enumerate_valid_sequences(a.size(), b.size(), monotone))
        if (eval_predicate_system(a, b, r, seq, monotone)) return true;
    return false;
}

// Best center objective over all k-subsets of the per-curve
// ell-simplifications. Upper bound on the optimal (k,ell)-center cost.
inline double brute_kl_center_candidate(const std::vector<Curve>& curves, std::size_t k,
                                        std::size_t ell) {
    if (curves.size() < k || k < 1) throw ParamOutOfRange("brute_kl_center_candidate: bad k");
    if (curves.size() > 12) throw CapExceeded("brute_kl_center_candidate: too many curves");
    std::vector<Curve> cand;
    cand.reserve(curves.size());
    for (const Curve& c : curves) cand.push_back(simplify_curve(c, ell).curve);

    const std::size_t nc = cand.size();
    double best = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> subset(k);
    for (std::size_t i = 0; i < k; ++i) subset[i] = i;
    for (;;) {
        std::vector<Curve> centers;
        for (std::size_t c : subset) centers.push_back(cand[c]);
        best = std::min(best, clustering_cost(curves, centers, Objective::center));
        std::size_t pos = k;
        while (pos > 0 && subset[pos - 1] == nc - k + pos - 1) --pos;
        if (pos == 0) break;
        ++subset[pos - 1];
        for (std::size_t q = pos; q < k; ++q) subset[q] = subset[q - 1] + 1;
    }
    return best;
}

}  // namespace oracle
}  // namespace curvedim
