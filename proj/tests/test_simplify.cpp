#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "curvedim/embed.hpp"
#include "curvedim/simplify.hpp"
#include "support.hpp"

using namespace curvedim;

namespace {

// Independent oracle: best bottleneck cost over all index subsequences
// 1 = i_1 < ... < i_k = n with k <= ell, via bitmasks over interior vertices.
double exhaustive_bottleneck(const SimplificationGraph& g, std::size_t ell) {
    const std::size_t n = g.n_vertices;
    const std::size_t interior = n - 2;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t mask = 0; mask < (std::size_t{1} << interior); ++mask) {
        std::vector<std::size_t> path{1};
        for (std::size_t b = 0; b < interior; ++b)
            if (mask & (std::size_t{1} << b)) path.push_back(b + 2);
        path.push_back(n);
        if (path.size() > ell) continue;
        double cost = 0.0;
        for (std::size_t i = 1; i < path.size(); ++i)
            cost = std::max(cost, g.weight(path[i - 1], path[i]));
        best = std::min(best, cost);
    }
    return best;
}

Curve spike_curve(double h) {
    return make_curve({{0, 0}, {2, 0}, {3, h}, {4, 0}, {6, 0}}, false, "spike");
}

}  // namespace

TEST_CASE("simplification graph weights", "[simplify]") {
    SECTION("near-collinear curve has near-zero weights") {
        const Curve c = make_curve({{0, 0}, {1, 1e-9}, {2, -1e-9}, {3, 0}});
        const SimplificationGraph g = build_simplification_graph(c);
        for (std::size_t i = 1; i <= 4; ++i)
            for (std::size_t j = i + 1; j <= 4; ++j) CHECK(g.weight(i, j) <= 1e-8);
    }
    SECTION("single interior vertex shortcut equals its segment distance") {
        const double h = 1.7;
        const SimplificationGraph g = build_simplification_graph(spike_curve(h));
        CHECK(g.weight(2, 4) == Catch::Approx(h));
        CHECK(g.weight(1, 2) == 0.0);
        CHECK(g.weight(4, 5) == 0.0);
    }
}

TEST_CASE("min_bottleneck_path endpoints and budgets", "[simplify]") {
    std::mt19937_64 rng(127);
    const Curve c = testsupport::random_curve(rng, 6, 2);
    const SimplificationGraph g = build_simplification_graph(c);

    SECTION("ell >= n keeps every vertex of a generic curve") {
        const BottleneckPath bp = min_bottleneck_path(g, 10);
        CHECK(bp.cost == 0.0);
        REQUIRE(bp.path.size() == 6);
        for (std::size_t i = 0; i < 6; ++i) CHECK(bp.path[i] == i + 1);
    }
    SECTION("ell = 2 is the single shortcut") {
        const BottleneckPath bp = min_bottleneck_path(g, 2);
        CHECK(bp.path == std::vector<std::size_t>{1, 6});
        CHECK(bp.cost == g.weight(1, 6));
    }
    SECTION("invalid ell") { CHECK_THROWS_AS(min_bottleneck_path(g, 1), ParamOutOfRange); }
}

TEST_CASE("min_bottleneck_path matches exhaustive enumeration", "[simplify]") {
    std::mt19937_64 rng(131);
    for (int it = 0; it < 20; ++it) {
        const std::size_t n = 4 + it % 7;  // up to 10 vertices
        const Curve c = testsupport::random_curve(rng, n, 2);
        const SimplificationGraph g = build_simplification_graph(c);
        for (std::size_t ell = 2; ell <= n; ++ell) {
            const BottleneckPath bp = min_bottleneck_path(g, ell);
            CHECK(bp.cost == exhaustive_bottleneck(g, ell));
            CHECK(bp.path.size() <= ell);
            CHECK(bp.path.front() == 1);
            CHECK(bp.path.back() == n);
        }
    }
}

TEST_CASE("simplify_curve basics", "[simplify]") {
    std::mt19937_64 rng(137);
    const Curve c = testsupport::random_curve(rng, 5, 2);

    SECTION("ell >= |c| returns the curve itself") {
        const SimplificationResult res = simplify_curve(c, 8);
        CHECK(res.curve.vertices() == c.vertices());
        CHECK(res.error == 0.0);
    }
    SECTION("result is a vertex subsequence keeping the endpoints") {
        const SimplificationResult res = simplify_curve(c, 3);
        CHECK(res.curve.front() == c.front());
        CHECK(res.curve.back() == c.back());
        for (std::size_t idx : res.indices) CHECK(idx <= c.size());
        CHECK(std::is_sorted(res.indices.begin(), res.indices.end()));
    }
    SECTION("error decreases as ell grows") {
        double prev = std::numeric_limits<double>::infinity();
        for (std::size_t ell = 2; ell <= 5; ++ell) {
            const double err = simplify_curve(c, ell).error;
            CHECK(err <= prev + 1e-12);
            prev = err;
        }
    }
    SECTION("straight redundant curve collapses to near zero error") {
        const Curve line = make_curve({{0, 0}, {1, 0}, {2, 0}, {3, 0}});
        CHECK(simplify_curve(line, 2).error <= 1e-9);
    }
}

TEST_CASE("spike curves: 4-approximation against the unrestricted optimum", "[simplify]") {
    // for the symmetric spike the optimal unrestricted 2-vertex curve has
    // error exactly h/2 (the segment at half height)
    for (double h : {0.5, 1.0, 2.5}) {
        const Curve c = spike_curve(h);
        const SimplificationResult res = simplify_curve(c, 2);
        CHECK(res.error <= 4.0 * (h / 2.0) + 1e-9);
        // vertex-restricted cannot beat the unrestricted optimum
        CHECK(res.error >= h / 2.0 - 1e-9);
    }
}

TEST_CASE("simplify commutes with certified embeddings (sandwich)", "[simplify][guarantee]") {
    std::mt19937_64 rng(139);
    const double eps = 0.9;
    int certified = 0;
    for (int it = 0; it < 2 && certified < 1; ++it) {
        const Curve sigma = testsupport::random_curve(rng, 3, 2, 1.0, "s");
        const Curve tau = testsupport::random_curve(rng, 4, 2, 1.0, "t");

        // certified set: vertices plus the lower augmentation over sigma, tau
        // and every shortcut segment of tau
        std::vector<Curve> family{sigma, tau};
        for (std::size_t i = 1; i <= tau.size(); ++i)
            for (std::size_t j = i + 1; j <= tau.size(); ++j)
                family.push_back(Curve::unchecked({tau.vertex(i - 1), tau.vertex(j - 1)}, "sc"));
        std::vector<Point> lower_pts;
        for (const Curve& c : family)
            for (const Point& p : c.vertices()) lower_pts.push_back(p);
        for (const Point& p : augmentation_lower(family)) lower_pts.push_back(p);

        const int d_prime = target_dimension(eps / 48.0, lower_pts.size(), 1.0);
        const LinearMap f = sample_map(2, d_prime, 7000 + it);
        if (!certify_embedding(f, lower_pts, eps / 48.0).passed) continue;

        const Curve fsigma = apply_map(f, sigma);
        const Curve ftau = apply_map(f, tau);
        const SimplificationResult simp = simplify_curve(ftau, 2);

        // pull the chosen indices back onto tau
        std::vector<Point> pre;
        for (std::size_t idx : simp.indices) pre.push_back(tau.vertex(idx - 1));
        const Curve s = Curve::unchecked(std::move(pre), "pullback");
        CHECK(apply_map(f, s).vertices() == simp.curve.vertices());

        // upper side: the same map must certify the witness set of (sigma, s)
        std::vector<Point> upper_pts;
        for (const Point& p : sigma.vertices()) upper_pts.push_back(p);
        for (const Point& p : s.vertices()) upper_pts.push_back(p);
        for (const Point& p : augmentation_upper(sigma, s)) upper_pts.push_back(p);
        if (!certify_embedding(f, upper_pts, eps).passed) continue;

        ++certified;
        const double before = frechet_distance(sigma, s);
        const double after = frechet_distance(fsigma, simp.curve);
        CHECK(after >= (1.0 - eps) * before - 1e-9);
        CHECK(after <= (1.0 + eps) * before + 1e-9);
    }
    CHECK(certified >= 1);
}
