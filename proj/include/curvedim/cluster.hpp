#pragma once

#include <algorithm>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "curvedim/frechet.hpp"
#include "curvedim/parallel.hpp"
#include "curvedim/simplify.hpp"

namespace curvedim {

enum class Objective { center, median };

struct ClusteringResult {
    std::vector<Curve> centers;
    std::map<std::string, std::size_t> assignment;  // curve id -> center index
    double cost = 0.0;
    Objective objective = Objective::center;
};

// Max-min (center) or sum-min (median) of Frechet distances to the nearest
// center.
inline double clustering_cost(const std::vector<Curve>& curves, const std::vector<Curve>& centers,
                              Objective objective) {
    if (centers.empty()) throw ParamOutOfRange("clustering_cost: no centers");
    double total = 0.0, worst = 0.0;
    for (const Curve& c : curves) {
        double best = std::numeric_limits<double>::infinity();
        for (const Curve& ctr : centers) best = std::min(best, frechet_distance(c, ctr));
        total += best;
        worst = std::max(worst, best);
    }
    return objective == Objective::center ? worst : total;
}

namespace detail {

inline std::size_t lowest_id_index(const std::vector<Curve>& curves) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < curves.size(); ++i)
        if (curves[i].id() < curves[best].id()) best = i;
    return best;
}

}  // namespace detail

// Farthest-first (k,ell)-center over already-embedded curves. The first
// center is the simplification of the curve with the lowest id; each round
// adds the simplification of the curve farthest from the current centers,
// ties broken by lowest id.
inline ClusteringResult kl_center(const std::vector<Curve>& curves, std::size_t k, std::size_t ell,
                                  int workers = 1) {
    if (k < 1) throw ParamOutOfRange("kl_center: k must be >= 1");
    if (ell < 2) throw ParamOutOfRange("kl_center: ell must be >= 2");
    if (curves.size() < k) throw TooFewCurves("kl_center: fewer curves than centers");

    ClusteringResult res;
    res.objective = Objective::center;

    const std::size_t n = curves.size();
    std::vector<double> dmin(n, std::numeric_limits<double>::infinity());
    std::vector<std::size_t> nearest(n, 0);

    std::size_t pick = detail::lowest_id_index(curves);
    for (std::size_t round = 0; round < k; ++round) {
        res.centers.push_back(simplify_curve(curves[pick], ell).curve);
        const Curve& ctr = res.centers.back();
        parallel_chunks(n, 4, workers, [&](std::size_t, std::size_t lo, std::size_t hi) {
            for (std::size_t i = lo; i < hi; ++i) {
                const double d = frechet_distance(curves[i], ctr);
                if (d < dmin[i]) {
                    dmin[i] = d;
                    nearest[i] = round;
                }
            }
        });
        if (round + 1 == k) break;
        std::size_t far = 0;
        for (std::size_t i = 1; i < n; ++i) {
            if (dmin[i] > dmin[far] || (dmin[i] == dmin[far] && curves[i].id() < curves[far].id()))
                far = i;
        }
        pick = far;
    }

    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        res.assignment[curves[i].id()] = nearest[i];
        worst = std::max(worst, dmin[i]);
    }
    res.cost = worst;
    return res;
}

enum class MedianMode { exhaustive, local_search };

namespace detail {

inline std::vector<Curve> median_candidates(const std::vector<Curve>& curves, std::size_t ell) {
    std::size_t max_complexity = 0;
    for (const Curve& c : curves) max_complexity = std::max(max_complexity, c.size());
    if (ell >= max_complexity) return curves;
    std::vector<Curve> cand;
    cand.reserve(curves.size());
    for (const Curve& c : curves) cand.push_back(simplify_curve(c, ell).curve);
    return cand;
}

inline double subset_cost(const std::vector<std::vector<double>>& dmat,
                          const std::vector<std::size_t>& subset, std::size_t n) {
    double total = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t c : subset) best = std::min(best, dmat[c][t]);
        total += best;
    }
    return total;
}

}  // namespace detail

// (k,ell)-median cost over the candidate set (the inputs themselves when
// ell covers their complexity, otherwise their ell-simplifications).
// exhaustive: best k-subset. local_search: single-swap descent from the k
// lowest-cost singletons, deterministic scan order.
inline double kl_median_cost(const std::vector<Curve>& curves, std::size_t k, std::size_t ell,
                             MedianMode mode, int workers = 1) {
    if (k < 1) throw ParamOutOfRange("kl_median_cost: k must be >= 1");
    if (ell < 2) throw ParamOutOfRange("kl_median_cost: ell must be >= 2");
    if (curves.size() < k) throw TooFewCurves("kl_median_cost: fewer curves than centers");

    const std::vector<Curve> cand = detail::median_candidates(curves, ell);
    const std::size_t nc = cand.size(), n = curves.size();

    std::vector<std::vector<double>> dmat(nc, std::vector<double>(n, 0.0));
    parallel_chunks(nc * n, 8, workers, [&](std::size_t, std::size_t lo, std::size_t hi) {
        for (std::size_t idx = lo; idx < hi; ++idx)
            dmat[idx / n][idx % n] = frechet_distance(cand[idx / n], curves[idx % n]);
    });

    if (mode == MedianMode::exhaustive) {
        double combos = 1.0;
        for (std::size_t i = 0; i < k; ++i) combos *= static_cast<double>(nc - i) / static_cast<double>(i + 1);
        if (combos > 1e6) throw CandidateBudgetExceeded("kl_median_cost: too many k-subsets");

        double best = std::numeric_limits<double>::infinity();
        std::vector<std::size_t> subset(k);
        for (std::size_t i = 0; i < k; ++i) subset[i] = i;
        for (;;) {
            best = std::min(best, detail::subset_cost(dmat, subset, n));
            // next lexicographic k-combination of [0, nc)
            std::size_t pos = k;
            while (pos > 0 && subset[pos - 1] == nc - k + pos - 1) --pos;
            if (pos == 0) break;
            ++subset[pos - 1];
            for (std::size_t q = pos; q < k; ++q) subset[q] = subset[q - 1] + 1;
        }
        return best;
    }

    // local search: seed with the k best singleton candidates
    std::vector<std::size_t> order(nc);
    for (std::size_t i = 0; i < nc; ++i) order[i] = i;
    std::vector<double> singleton(nc);
    for (std::size_t c = 0; c < nc; ++c) {
        double s = 0.0;
        for (std::size_t t = 0; t < n; ++t) s += dmat[c][t];
        singleton[c] = s;
    }
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return singleton[x] < singleton[y]; });
    std::vector<std::size_t> current(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k));
    std::sort(current.begin(), current.end());
    double cost = detail::subset_cost(dmat, current, n);

    bool improved = true;
    while (improved) {
        improved = false;
        for (std::size_t slot = 0; slot < k && !improved; ++slot) {
            for (std::size_t c = 0; c < nc && !improved; ++c) {
                if (std::find(current.begin(), current.end(), c) != current.end()) continue;
                std::vector<std::size_t> trial = current;
                trial[slot] = c;
                const double tc = detail::subset_cost(dmat, trial, n);
                if (tc < cost) {
                    current = trial;
                    std::sort(current.begin(), current.end());
                    cost = tc;
                    improved = true;
                }
            }
        }
    }
    return cost;
}

struct MedianSandwichReport {
    double r_original = 0.0;   // candidate-restricted optimum in source space
    double r_embedded = 0.0;   // same in target space
    double lower_bound = 0.0;  // (1-eps)/c_ell * r_original / 2
    double upper_bound = 0.0;  // 2 (1+eps) * r_original
    double c_ell = 0.0;
    bool unrestricted = false;  // ell >= max input complexity
    bool lower_ok = false;
    bool upper_ok = false;
    bool upper_strict_ok = false;  // r_embedded <= (1+eps) r_original; meaningful when unrestricted
    bool passed = false;
};

// Cost sandwich for the (k,ell)-median optimum under an embedding. The
// candidate-restricted optima stand in for the true optima; a factor-2 slack
// on each side accounts for that restriction (averaging argument), on top of
// the 2 (unrestricted) or 6(1+eps)/(1-eps) (restricted) analysis constants.
inline MedianSandwichReport median_sandwich_check(const std::vector<Curve>& original,
                                                  const std::vector<Curve>& embedded, std::size_t k,
                                                  std::size_t ell, double eps, int workers = 1) {
    if (original.size() != embedded.size())
        throw ParamOutOfRange("median_sandwich_check: curve sets differ in size");
    MedianSandwichReport rep;
    std::size_t max_complexity = 0;
    for (const Curve& c : original) max_complexity = std::max(max_complexity, c.size());
    rep.unrestricted = ell >= max_complexity;
    rep.c_ell = rep.unrestricted ? 2.0 : 6.0 * (1.0 + eps) / (1.0 - eps);
    rep.r_original = kl_median_cost(original, k, ell, MedianMode::exhaustive, workers);
    rep.r_embedded = kl_median_cost(embedded, k, ell, MedianMode::exhaustive, workers);
    rep.lower_bound = (1.0 - eps) / rep.c_ell * rep.r_original / 2.0;
    rep.upper_bound = 2.0 * (1.0 + eps) * rep.r_original;
    const double slack = 1e-12 * std::max(1.0, rep.r_original);
    rep.lower_ok = rep.r_embedded >= rep.lower_bound - slack;
    rep.upper_ok = rep.r_embedded <= rep.upper_bound + slack;
    rep.upper_strict_ok = rep.r_embedded <= (1.0 + eps) * rep.r_original + slack;
    rep.passed = rep.lower_ok && rep.upper_ok && (!rep.unrestricted || rep.upper_strict_ok);
    return rep;
}

}  // namespace curvedim
