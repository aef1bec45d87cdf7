#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "oracle_helpers.hpp"
#include "screenlab/distribution.hpp"

using namespace screenlab;

TEST_CASE("uniform law: density, cdf, survivor, mean") {
    const auto u = make_uniform(2.0, 6.0);
    CHECK(u.support_lo() == 2.0);
    CHECK(u.support_hi() == 6.0);
    CHECK(u.density(3.0) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(u.density(1.9) == 0.0);
    CHECK(u.density(6.1) == 0.0);
    CHECK(u.cdf(2.0) == 0.0);
    CHECK(u.cdf(6.0) == 1.0);
    CHECK(u.cdf(5.0) == doctest::Approx(0.75).epsilon(1e-14));
    CHECK(u.survivor(5.0) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(u.survivor(1.0) == 1.0);
    CHECK(u.survivor(7.0) == 0.0);
    CHECK(u.mean() == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("triangular law has exact quadratic cdf") {
    const BoundedDistribution tri({{0.0, 0.0}, {1.0, 2.0}});
    for (double x : {0.1, 0.25, 0.5, 0.775, 0.9})
        CHECK(tri.cdf(x) == doctest::Approx(x * x).epsilon(1e-14));
    CHECK(tri.mean() == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("construction renormalizes and reports the factor") {
    const BoundedDistribution d({{0.0, 2.0}, {1.0, 2.0}});
    CHECK(d.renormalization() == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(d.density(0.5) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(d.cdf(1.0) == 1.0);
}

TEST_CASE("constructor rejects malformed knot lists") {
    CHECK_THROWS_AS(BoundedDistribution({{0.0, 1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(BoundedDistribution({{0.0, 1.0}, {0.0, 1.0}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(BoundedDistribution({{1.0, 1.0}, {0.0, 1.0}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(BoundedDistribution({{0.0, -1.0}, {1.0, 1.0}}),
                    std::invalid_argument);
    // zero density at an interior knot splits the support
    CHECK_THROWS_AS(BoundedDistribution({{0.0, 1.0}, {0.5, 0.0}, {1.0, 1.0}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(BoundedDistribution({{0.0, 0.0}, {1.0, 0.0}}),
                    std::invalid_argument);
    const double inf = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(BoundedDistribution({{0.0, 1.0}, {inf, 1.0}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(make_uniform(1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(BoundedDistribution({{0.0, 1.0}, {1.0, 1.0}}, 2),
                    std::invalid_argument);
}

TEST_CASE("quantile_upper inverts the survivor") {
    const auto u = make_uniform(0.0, 1.0);
    for (double p : {0.999, 0.9, 0.5, 0.1, 0.01, 1e-4})
        CHECK(std::abs(u.quantile_upper(p) - (1.0 - p)) < 1e-10);
    CHECK_THROWS_AS(u.quantile_upper(0.0), std::invalid_argument);
    CHECK_THROWS_AS(u.quantile_upper(1.0), std::invalid_argument);
    CHECK_THROWS_AS(u.quantile_upper(-0.5), std::invalid_argument);
}

TEST_CASE("random laws: cdf properties and quantile round trip") {
    std::mt19937_64 rng(9021);
    for (int iter = 0; iter < 30; ++iter) {
        const BoundedDistribution d(oracle::random_knots(rng));
        CHECK(d.cdf(d.support_lo()) == 0.0);
        CHECK(d.cdf(d.support_hi()) == 1.0);
        double prev = 0.0;
        for (int i = 0; i <= 64; ++i) {
            const double x = d.support_lo() +
                             (d.support_hi() - d.support_lo()) * i / 64.0;
            const double c = d.cdf(x);
            CHECK(c >= prev - 1e-15);
            CHECK(d.density(x) >= 0.0);
            CHECK(c + d.survivor(x) == doctest::Approx(1.0).epsilon(1e-12));
            prev = c;
        }
        for (double p : {0.9, 0.5, 0.05, 0.004}) {
            const double v = d.quantile_upper(p);
            CHECK(std::abs(d.survivor(v) - p) < 1e-8);
        }
    }
}

TEST_CASE("cdf agrees with independent quadrature of the density") {
    std::mt19937_64 rng(77);
    for (int iter = 0; iter < 10; ++iter) {
        const BoundedDistribution d(oracle::random_knots(rng));
        const std::vector<double> brk = d.knot_positions();
        for (int i = 1; i < 8; ++i) {
            const double x = d.support_lo() +
                             (d.support_hi() - d.support_lo()) * i / 8.0;
            const double ref = oracle::integrate(
                [&d](double t) { return d.density(t); }, d.support_lo(), x, brk);
            CHECK(d.cdf(x) == doctest::Approx(ref).epsilon(1e-10));
        }
    }
}

TEST_CASE("same_law: scaling-invariant equality, sensitive to real change") {
    const BoundedDistribution a({{0.0, 1.0}, {0.5, 2.0}, {1.0, 0.5}});
    const BoundedDistribution b({{0.0, 3.0}, {0.5, 6.0}, {1.0, 1.5}});
    CHECK(same_law(a, b));
    const BoundedDistribution c({{0.0, 1.0}, {0.5, 2.1}, {1.0, 0.5}});
    CHECK_FALSE(same_law(a, c));
    CHECK_FALSE(same_law(a, make_uniform(0.0, 1.0)));
    CHECK_FALSE(same_law(a, BoundedDistribution({{0.0, 1.0}, {0.5, 2.0}, {1.1, 0.5}})));
}

TEST_CASE("noise: symmetry about zero is enforced") {
    CHECK_NOTHROW(NoiseSpec(make_uniform(-0.25, 0.25)));
    CHECK_NOTHROW(NoiseSpec(BoundedDistribution({{-1.0, 0.5}, {0.0, 2.0}, {1.0, 0.5}})));
    CHECK_THROWS_AS(NoiseSpec(make_uniform(-0.2, 0.25)), std::invalid_argument);
    CHECK_THROWS_AS(
        NoiseSpec(BoundedDistribution({{-1.0, 0.5}, {0.0, 2.0}, {1.0, 1.5}})),
        std::invalid_argument);
    const NoiseSpec n(make_uniform(-0.25, 0.25));
    CHECK(n.lower() == -0.25);
    CHECK(n.upper() == 0.25);
    CHECK(n.survivor(0.0) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("sum_survivor matches the closed form for uniform + uniform") {
    const auto V = make_uniform(0.0, 1.0);
    for (double w : {0.25, 0.2, 0.4}) {
        const NoiseSpec N(make_uniform(-w, w));
        for (int i = 0; i <= 40; ++i) {
            const double t = -w - 0.1 + (1.2 + 2.0 * w) * i / 40.0;
            CHECK(sum_survivor(V, N, t) ==
                  doctest::Approx(oracle::sum_tail_uniform(w, t)).epsilon(1e-10));
        }
    }
    const NoiseSpec N(make_uniform(-0.25, 0.25));
    CHECK(sum_survivor(V, N, -0.25) == 1.0);
    CHECK(sum_survivor(V, N, 1.25) == 0.0);
}

TEST_CASE("sum_survivor with an interval shorter than the noise margin") {
    // With V on [0, 0.2] and t right at lo + upper(N), the closed-form value
    // of the acceptance chance is 0.2, from integrating 5 * 2x on [0, 0.2].
    const auto V = make_uniform(0.0, 0.2);
    const NoiseSpec N(make_uniform(-0.25, 0.25));
    CHECK(sum_survivor(V, N, 0.25) == doctest::Approx(0.2).epsilon(1e-10));
}
