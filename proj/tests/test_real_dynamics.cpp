#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "rootflow/errors.hpp"
#include "rootflow/measures.hpp"
#include "rootflow/real_dynamics.hpp"
#include "rootflow/rng.hpp"
#include "support/poly_oracle.hpp"

using namespace rootflow;

namespace {

std::vector<double> sorted_uniform(Rng& rng, int n, double lo, double hi) {
    std::vector<double> v(static_cast<std::size_t>(n));
    for (auto& x : v) x = rng.uniform(lo, hi);
    std::sort(v.begin(), v.end());
    return v;
}

} // namespace

TEST_CASE("symmetric pair gives the midpoint") {
    const auto out = weighted_derivative_roots({{-1.0, 1.0}, {1.0, 1.0}});
    REQUIRE(out.roots.size() == 1);
    CHECK(std::fabs(out.roots[0]) <= 1e-14);
    CHECK(out.weights == std::vector<double>{1.0});
}

TEST_CASE("double root at zero: derivative of z^2(z-1)") {
    const auto out = weighted_derivative_roots({{0.0, 0.0, 1.0}, {1.0, 1.0, 1.0}});
    REQUIRE(out.roots.size() == 2);
    CHECK(out.roots[0] == 0.0);
    CHECK(out.roots[1] == doctest::Approx(2.0 / 3.0).epsilon(1e-13));
}

TEST_CASE("two roots, asymmetric weights: closed form q*r/(q+m)") {
    const double q = 2.0, m = 3.0, r = 1.0;
    const auto out = weighted_derivative_roots({{0.0, r}, {q, m}});
    REQUIRE(out.roots.size() == 1);
    CHECK(out.roots[0] == doctest::Approx(q * r / (q + m)).epsilon(1e-13));
}

TEST_CASE("repeated_derivative examples") {
    const RealRootMultiset s{{1.0, 2.0, 3.0}, {1.0, 1.0, 1.0}};
    CHECK(repeated_derivative(s, 0).roots == s.roots);

    // z^3 (z-1): third derivative has the single root 1/4
    const auto third = repeated_derivative({{0.0, 0.0, 0.0, 1.0}, {1, 1, 1, 1}}, 3);
    REQUIRE(third.roots.size() == 1);
    CHECK(third.roots[0] == doctest::Approx(0.25).epsilon(1e-13));

    // roots of 3z^2 - 12z + 11: 2 +- 1/sqrt(3)
    const auto once = repeated_derivative(s, 1);
    REQUIRE(once.roots.size() == 2);
    CHECK(once.roots[0] == doctest::Approx(2.0 - 1.0 / std::sqrt(3.0)).epsilon(1e-13));
    CHECK(once.roots[1] == doctest::Approx(2.0 + 1.0 / std::sqrt(3.0)).epsilon(1e-13));
}

TEST_CASE("preconditions") {
    CHECK_THROWS_AS(weighted_derivative_roots({{1.0}, {1.0}}), domain_error);
    CHECK_THROWS_AS(weighted_derivative_roots({{1.0, 2.0}, {1.0, -1.0}}), domain_error);
    CHECK_THROWS_AS(weighted_derivative_roots({{2.0, 1.0}, {1.0, 1.0}}), domain_error);
    CHECK_THROWS_AS(repeated_derivative({{0.0, 1.0}, {1.0, 2.0}}, 1), domain_error);
    CHECK_THROWS_AS(repeated_derivative({{0.0, 1.0}, {1.0, 1.0}}, 2), domain_error);
    CHECK_THROWS_AS(repeated_derivative({{0.0, 1.0}, {1.0, 1.0}}, -1), domain_error);
}

TEST_CASE("interlacing: output roots sit strictly inside the input gaps") {
    Rng rng(101);
    for (int rep = 0; rep < 200; ++rep) {
        const int n = 2 + static_cast<int>(rng.below(9));
        auto roots = sorted_uniform(rng, n, -2.0, 2.0);
        std::vector<double> w(static_cast<std::size_t>(n));
        for (auto& x : w) x = rng.uniform(0.1, 2.0);
        const auto out = weighted_derivative_roots({roots, w});
        REQUIRE(out.roots.size() == roots.size() - 1);
        for (std::size_t i = 0; i + 1 < roots.size(); ++i) {
            CHECK(out.roots[i] > roots[i]);
            CHECK(out.roots[i] < roots[i + 1]);
        }
    }
}

TEST_CASE("coefficient oracle: expanded polynomial, generic real-root solve") {
    Rng rng(211);
    for (int n = 2; n <= 8; ++n) {
        for (int rep = 0; rep < 50; ++rep) {
            const auto roots = sorted_uniform(rng, n, -1.5, 1.5);
            std::vector<double> w(static_cast<std::size_t>(n));
            for (auto& x : w) x = rng.uniform(0.2, 3.0);
            const auto engine = weighted_derivative_roots({roots, w});
            const auto expanded = oracle::weighted_derivative_poly(roots, w);
            const auto expected = oracle::real_roots(expanded);
            REQUIRE(expected.size() == engine.roots.size());
            for (std::size_t i = 0; i < expected.size(); ++i)
                CHECK(std::fabs(engine.roots[i] - expected[i]) <= 1e-10);
        }
    }
}

TEST_CASE("monotonicity: ordered inputs give ordered outputs, strictly larger sum") {
    Rng rng(307);
    for (int n = 2; n <= 12; ++n) {
        for (int rep = 0; rep < 1000; ++rep) {
            auto z = sorted_uniform(rng, n, -1.0, 1.0);
            auto z2 = z;
            for (auto& x : z2) x += rng.uniform(0.0, 0.5);
            std::sort(z2.begin(), z2.end());
            std::vector<double> w(static_cast<std::size_t>(n));
            for (auto& x : w) x = rng.uniform(0.1, 2.0);

            const auto a = weighted_derivative_roots({z, w});
            const auto b = weighted_derivative_roots({z2, w});
            double sum_a = 0.0, sum_b = 0.0;
            for (std::size_t i = 0; i < a.roots.size(); ++i) {
                CHECK(b.roots[i] >= a.roots[i] - 1e-12);
                sum_a += a.roots[i];
                sum_b += b.roots[i];
            }
            CHECK(sum_b > sum_a);
        }
    }
}

TEST_CASE("Lipschitz bound n/(n-1) in the Levy metric, unordered pairs") {
    Rng rng(401);
    for (int n : {2, 3, 5, 8, 12}) {
        const double bound = static_cast<double>(n) / (n - 1);
        for (int rep = 0; rep < 1000; ++rep) {
            const auto z = sorted_uniform(rng, n, -1.0, 1.0);
            const auto z2 = sorted_uniform(rng, n, -1.0, 1.0);
            const std::vector<double> w(static_cast<std::size_t>(n), 1.0);
            const auto a = weighted_derivative_roots({z, w});
            const auto b = weighted_derivative_roots({z2, w});
            const double d_in = levy_distance(EmpiricalMeasure1D(z), EmpiricalMeasure1D(z2));
            const double d_out =
                levy_distance(EmpiricalMeasure1D(a.roots), EmpiricalMeasure1D(b.roots));
            CHECK(d_out <= bound * d_in + 0x1.0p-40);
        }
    }
}

TEST_CASE("weight scaling does not move the roots") {
    Rng rng(53);
    const auto z = sorted_uniform(rng, 6, -1.0, 1.0);
    std::vector<double> w(6);
    for (auto& x : w) x = rng.uniform(0.1, 2.0);
    std::vector<double> w2 = w;
    for (auto& x : w2) x *= 7.5;
    const auto a = weighted_derivative_roots({z, w});
    const auto b = weighted_derivative_roots({z, w2});
    for (std::size_t i = 0; i < a.roots.size(); ++i)
        CHECK(std::fabs(a.roots[i] - b.roots[i]) <= 1e-12);
}
