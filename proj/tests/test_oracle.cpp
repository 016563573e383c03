#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "curvedim/oracle.hpp"
#include "support.hpp"

using namespace curvedim;

namespace {

Curve seg(double ax, double ay, double bx, double by) {
    return make_curve({{ax, ay}, {bx, by}});
}

std::size_t binom(std::size_t n, std::size_t k) {
    std::size_t r = 1;
    for (std::size_t i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
    return r;
}

}  // namespace

TEST_CASE("brute_discrete_frechet agrees with the dynamic program", "[oracle]") {
    const Curve a = make_curve({{0, 0}, {1, 0}});
    CHECK(oracle::brute_discrete_frechet(a, a) == 0.0);
    CHECK(oracle::brute_discrete_frechet(seg(0, 0, 1, 0), seg(0, 2, 1, 3)) == 2.0 + 1.0);

    std::mt19937_64 rng(53);
    for (int it = 0; it < 200; ++it) {
        const Curve x = testsupport::random_curve(rng, 2 + it % 5, 2);
        const Curve y = testsupport::random_curve(rng, 2 + (it / 5) % 5, 2);
        CHECK(discrete_frechet(x, y) == oracle::brute_discrete_frechet(x, y));
    }
    const Curve big = testsupport::random_curve(rng, 8, 2);
    CHECK_THROWS_AS(oracle::brute_discrete_frechet(big, big), CapExceeded);
}

TEST_CASE("resampled band brackets the continuous distance", "[oracle]") {
    const Curve a = make_curve({{0, 0}, {1, 0}, {2, 1}});
    const oracle::OracleBand zero = oracle::resampled_frechet_band(a, a, 0.01);
    CHECK(zero.lower == 0.0);
    CHECK(zero.upper == 0.0);

    const oracle::OracleBand unit = oracle::resampled_frechet_band(seg(0, 0, 1, 0), seg(0, 1, 1, 1), 0.01);
    CHECK(unit.contains(1.0));
    CHECK(unit.upper - unit.lower <= 0.02 + 1e-12);

    std::mt19937_64 rng(59);
    for (int it = 0; it < 25; ++it) {
        const Curve x = testsupport::random_curve(rng, 4, 2);
        const Curve y = testsupport::random_curve(rng, 4, 2);
        const double d = frechet_distance(x, y);
        CHECK(oracle::resampled_frechet_band(x, y, 0.05).contains(d));
    }
}

TEST_CASE("band width shrinks with delta", "[oracle]") {
    std::mt19937_64 rng(61);
    const Curve x = testsupport::random_curve(rng, 4, 2);
    const Curve y = testsupport::random_curve(rng, 4, 2);
    double prev = std::numeric_limits<double>::infinity();
    for (double delta : {0.1, 0.05, 0.01}) {
        const oracle::OracleBand band = oracle::resampled_frechet_band(x, y, delta);
        const double width = band.upper - band.lower;
        CHECK(width <= prev + 1e-12);
        CHECK(width <= 2.0 * delta + 1e-12);
        prev = width;
    }
}

TEST_CASE("enumerate_valid_sequences counts", "[oracle]") {
    CHECK(oracle::enumerate_valid_sequences(2, 2, true).size() == 1);
    CHECK(oracle::enumerate_valid_sequences(3, 3, true).size() == 2);
    // monotone count for a p x q cell grid is C(p+q-2, p-1)
    for (std::size_t na = 2; na <= 5; ++na)
        for (std::size_t nb = 2; nb <= 5; ++nb) {
            const std::size_t p = na - 1, q = nb - 1;
            CHECK(oracle::enumerate_valid_sequences(na, nb, true).size() == binom(p + q - 2, p - 1));
        }
    // non-monotone enumeration includes the monotone walks
    CHECK(oracle::enumerate_valid_sequences(3, 3, false).size() >=
          oracle::enumerate_valid_sequences(3, 3, true).size());
    CHECK_THROWS_AS(oracle::enumerate_valid_sequences(8, 3, true), CapExceeded);
    CHECK_THROWS_AS(oracle::enumerate_valid_sequences(6, 3, false), CapExceeded);
}

TEST_CASE("every enumerated sequence validates", "[oracle]") {
    for (bool monotone : {true, false}) {
        for (const ValidSequence& seq : oracle::enumerate_valid_sequences(4, 3, monotone)) {
            CHECK_NOTHROW(validate_sequence(seq, 4, 3, monotone));
        }
    }
}

TEST_CASE("predicate oracle decision basics", "[oracle]") {
    const Curve a = seg(0, 0, 1, 0);
    const Curve b = seg(0, 1, 1, 1);
    CHECK(oracle::predicate_oracle_decision(a, b, 100.0, true));
    CHECK_FALSE(oracle::predicate_oracle_decision(a, b, 0.0, true));  // distinct starts
    CHECK(oracle::predicate_oracle_decision(a, a, 0.0, true));
}

TEST_CASE("predicate oracle agrees with the free-space deciders", "[oracle]") {
    std::mt19937_64 rng(67);
    for (int it = 0; it < 40; ++it) {
        const Curve a = testsupport::random_curve(rng, 2 + it % 3, 2);
        const Curve b = testsupport::random_curve(rng, 2 + (it / 3) % 3, 2);
        for (double v : critical_values(a, b)) {
            for (double r : {v - 1e-6, v + 1e-6}) {
                if (r < 0) continue;
                CHECK(decide_frechet(a, b, r) == oracle::predicate_oracle_decision(a, b, r, true));
                CHECK(decide_weak_frechet(a, b, r) == oracle::predicate_oracle_decision(a, b, r, false));
            }
        }
    }
}

TEST_CASE("brute_kl_center_candidate small cases", "[oracle]") {
    const Curve a = make_curve({{0, 0}, {1, 0}, {2, 1}}, false, "a");
    const Curve b = make_curve({{0, 3}, {1, 3}, {2, 4}}, false, "b");
    // k = n with ell covering the complexity: every curve its own center
    CHECK(oracle::brute_kl_center_candidate({a, b}, 2, 3) == 0.0);
    // k = 1: best of the two candidate centers
    const double v = oracle::brute_kl_center_candidate({a, b}, 1, 3);
    const double expect = std::min(std::max(frechet_distance(a, a), frechet_distance(b, a)),
                                   std::max(frechet_distance(a, b), frechet_distance(b, b)));
    CHECK(v == Catch::Approx(expect));
}
