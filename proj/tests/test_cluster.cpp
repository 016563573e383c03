#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "curvedim/cluster.hpp"
#include "curvedim/dataset.hpp"
#include "curvedim/embed.hpp"
#include "curvedim/oracle.hpp"
#include "support.hpp"

using namespace curvedim;

namespace {

std::vector<Curve> random_instance(std::mt19937_64& rng, std::size_t n, std::size_t m, std::size_t d) {
    std::vector<Curve> out;
    for (std::size_t i = 0; i < n; ++i)
        out.push_back(testsupport::random_curve(rng, m, d, 1.0, "c" + std::to_string(i)));
    return out;
}

}  // namespace

TEST_CASE("clustering_cost objectives", "[cluster]") {
    std::mt19937_64 rng(149);
    const std::vector<Curve> curves = random_instance(rng, 4, 3, 2);
    CHECK(clustering_cost(curves, curves, Objective::center) == 0.0);
    CHECK(clustering_cost(curves, curves, Objective::median) == 0.0);

    const Curve a = make_curve({{0, 0}, {1, 0}}, false, "a");
    const Curve b = make_curve({{0, 3}, {1, 3}}, false, "b");
    CHECK(clustering_cost({a, b}, {a}, Objective::center) == Catch::Approx(3.0));
    CHECK(clustering_cost({a, b}, {a}, Objective::median) == Catch::Approx(3.0));

    // sum-min is at most n times max-min
    const std::vector<Curve> centers{curves[0], curves[2]};
    CHECK(clustering_cost(curves, centers, Objective::median) <=
          4.0 * clustering_cost(curves, centers, Objective::center) + 1e-12);
    CHECK_THROWS_AS(clustering_cost(curves, {}, Objective::center), ParamOutOfRange);
}

TEST_CASE("kl_center basics", "[cluster]") {
    std::mt19937_64 rng(151);
    const std::vector<Curve> curves = random_instance(rng, 5, 3, 2);

    SECTION("k = n with generous ell gives zero cost") {
        const ClusteringResult res = kl_center(curves, 5, 4);
        CHECK(res.centers.size() == 5);
        CHECK(res.cost <= 1e-12);
    }
    SECTION("k = 1 on two parallel segments picks the lowest id") {
        const Curve a = make_curve({{0, 0}, {1, 0}}, false, "a");
        const Curve b = make_curve({{0, 2}, {1, 2}}, false, "b");
        const ClusteringResult res = kl_center({b, a}, 1, 2);
        REQUIRE(res.centers.size() == 1);
        CHECK(res.centers[0].vertices() == a.vertices());
        CHECK(res.cost == Catch::Approx(2.0));
    }
    SECTION("cost is reproduced by clustering_cost on the assignment") {
        const ClusteringResult res = kl_center(curves, 2, 2);
        CHECK(res.cost == Catch::Approx(clustering_cost(curves, res.centers, Objective::center)).margin(1e-9));
        CHECK(res.assignment.size() == curves.size());
        for (const auto& [id, idx] : res.assignment) CHECK(idx < res.centers.size());
    }
    SECTION("deterministic across repeated runs and worker counts") {
        const ClusteringResult r1 = kl_center(curves, 3, 2, 1);
        const ClusteringResult r2 = kl_center(curves, 3, 2, 8);
        CHECK(r1.cost == r2.cost);
        REQUIRE(r1.centers.size() == r2.centers.size());
        for (std::size_t i = 0; i < r1.centers.size(); ++i)
            CHECK(r1.centers[i].vertices() == r2.centers[i].vertices());
    }
    SECTION("errors") {
        CHECK_THROWS_AS(kl_center(curves, 9, 2), TooFewCurves);
        CHECK_THROWS_AS(kl_center(curves, 0, 2), ParamOutOfRange);
        CHECK_THROWS_AS(kl_center(curves, 2, 1), ParamOutOfRange);
    }
}

TEST_CASE("adding a curve never lowers the center objective", "[cluster]") {
    std::mt19937_64 rng(157);
    for (int it = 0; it < 10; ++it) {
        std::vector<Curve> curves = random_instance(rng, 4, 3, 2);
        const std::vector<Curve> centers{curves[0], curves[1]};
        const double before = clustering_cost(curves, centers, Objective::center);
        curves.push_back(testsupport::random_curve(rng, 3, 2, 1.0, "extra"));
        CHECK(clustering_cost(curves, centers, Objective::center) >= before - 1e-12);
    }
}

TEST_CASE("kl_median_cost modes", "[cluster]") {
    std::mt19937_64 rng(163);
    const std::vector<Curve> curves = random_instance(rng, 5, 3, 2);

    SECTION("k = n is free") { CHECK(kl_median_cost(curves, 5, 3, MedianMode::exhaustive) == 0.0); }
    SECTION("identical curves need one center") {
        const Curve proto = testsupport::random_curve(rng, 3, 2, 1.0, "p");
        std::vector<Curve> same{proto, proto, proto};
        CHECK(kl_median_cost(same, 1, 3, MedianMode::exhaustive) == 0.0);
    }
    SECTION("local search is feasible and within the single-swap band") {
        for (int it = 0; it < 5; ++it) {
            const std::vector<Curve> inst = random_instance(rng, 6, 3, 2);
            for (std::size_t k : {std::size_t{1}, std::size_t{2}}) {
                const double ex = kl_median_cost(inst, k, 3, MedianMode::exhaustive);
                const double ls = kl_median_cost(inst, k, 3, MedianMode::local_search);
                CHECK(ls >= ex - 1e-12);
                CHECK(ls <= 5.0 * ex + 1e-9);
            }
        }
    }
    SECTION("simplified candidates when ell is below the complexity") {
        const double v = kl_median_cost(curves, 2, 2, MedianMode::exhaustive);
        CHECK(v >= 0.0);
        CHECK(std::isfinite(v));
    }
    SECTION("errors") { CHECK_THROWS_AS(kl_median_cost(curves, 6, 2, MedianMode::exhaustive), TooFewCurves); }
}

TEST_CASE("median sandwich under the identity embedding", "[cluster]") {
    std::mt19937_64 rng(167);
    const std::vector<Curve> curves = random_instance(rng, 5, 3, 2);

    SECTION("identity map, eps = 0: optima coincide") {
        const MedianSandwichReport rep = median_sandwich_check(curves, curves, 2, 3, 0.0);
        CHECK(rep.r_original == rep.r_embedded);
        CHECK(rep.passed);
        CHECK(rep.unrestricted);
        CHECK(rep.upper_strict_ok);
    }
    SECTION("restricted centers use the adjusted constant") {
        const MedianSandwichReport rep = median_sandwich_check(curves, curves, 2, 2, 0.1);
        CHECK_FALSE(rep.unrestricted);
        CHECK(rep.c_ell == Catch::Approx(6.0 * 1.1 / 0.9));
        CHECK(rep.passed);
    }
    SECTION("k = n is vacuous") {
        const MedianSandwichReport rep = median_sandwich_check(curves, curves, 5, 3, 0.2);
        CHECK(rep.r_original == 0.0);
        CHECK(rep.r_embedded == 0.0);
        CHECK(rep.passed);
    }
}

TEST_CASE("kl_center recovers planted clusters", "[cluster]") {
    const GenParams params{.n = 8, .m = 4, .d = 3, .amplitude = 0.1, .separation = 20.0, .k_groups = 2};
    const Dataset ds = generate(Family::perturbed_copies, params, 11);
    const ClusteringResult res = kl_center(ds.curves, 2, 4);
    // within-group distances are at most the amplitude, so two centers cover
    // everything at that scale
    CHECK(res.cost <= params.amplitude + 1e-9);
    // both planted groups get their own center
    std::vector<std::size_t> seen;
    for (const auto& [id, idx] : res.assignment) seen.push_back(idx);
    CHECK(std::count(seen.begin(), seen.end(), 0) == 4);
    CHECK(std::count(seen.begin(), seen.end(), 1) == 4);
}

TEST_CASE("gonzalez surrogate bounds on small embedded instances", "[cluster][guarantee]") {
    std::mt19937_64 rng(173);
    const double eps = 0.2;
    for (int it = 0; it < 5; ++it) {
        const std::vector<Curve> curves = random_instance(rng, 5, 3, 3);
        const EmbedResult emb = embed_curve_set(curves, eps, 100 + it, CertifyMode::lower);
        REQUIRE(emb.report.has_value());
        if (!emb.report->passed) continue;

        // upper surrogate: cost <= (6 + 38 eps) * candidate optimum
        const double cand = oracle::brute_kl_center_candidate(emb.curves, 2, 2);
        const ClusteringResult res = kl_center(emb.curves, 2, 2);
        CHECK(res.cost <= (6.0 + 38.0 * eps) * cand + 1e-9);

        // lower surrogate for k = 1: at least (1 - 3 eps) * diameter / 2
        double diam = 0.0;
        for (std::size_t i = 0; i < curves.size(); ++i)
            for (std::size_t j = i + 1; j < curves.size(); ++j)
                diam = std::max(diam, frechet_distance(curves[i], curves[j]));
        const ClusteringResult one = kl_center(emb.curves, 1, 2);
        CHECK(one.cost >= (1.0 - 3.0 * eps) * diam / 2.0 - 1e-9);
    }
}
