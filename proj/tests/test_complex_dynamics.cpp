#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "rootflow/complex_dynamics.hpp"
#include "rootflow/errors.hpp"
#include "rootflow/radial_dynamics.hpp"
#include "rootflow/real_dynamics.hpp"
#include "rootflow/rng.hpp"

using namespace rootflow;
using cplx = std::complex<double>;

namespace {

constexpr double kPi = 3.14159265358979323846;

ComplexRootSet circle_points(const std::vector<double>& radii, int m) {
    std::vector<cplx> pts;
    for (double r : radii)
        for (int k = 0; k < m; ++k) pts.push_back(std::polar(r, 2.0 * kPi * k / m));
    return ComplexRootSet(std::move(pts));
}

std::vector<double> sorted_moduli(const ComplexRootSet& s) {
    std::vector<double> v;
    for (const auto& z : s.roots()) v.push_back(std::abs(z));
    std::sort(v.begin(), v.end());
    return v;
}

std::vector<double> random_ladder(Rng& rng, int n, double lo, double hi) {
    std::vector<double> r(static_cast<std::size_t>(n));
    for (auto& x : r) x = rng.uniform(lo, hi);
    std::sort(r.begin(), r.end());
    for (std::size_t i = 1; i < r.size(); ++i)
        if (r[i] <= r[i - 1]) r[i] = std::nextafter(r[i - 1], 1e300);
    return r;
}

} // namespace

TEST_CASE("derivative: symmetric pair, monomial cluster, shifted cubic") {
    const auto mid = derivative_roots_complex(ComplexRootSet({{1.0, 0.0}, {-1.0, 0.0}}));
    REQUIRE(mid.degree() == 1);
    CHECK(std::abs(mid.roots()[0]) < 1e-13);

    // P = z^4 - 1: P' = 4z^3, a triple root at the origin. The implicit
    // Newton ratio hits its cancellation floor near a multiple root, so the
    // cluster is resolved to ~1e-5, not machine precision.
    const auto cluster = derivative_roots_complex(
        ComplexRootSet({{1.0, 0.0}, {-1.0, 0.0}, {0.0, 1.0}, {0.0, -1.0}}));
    REQUIRE(cluster.degree() == 3);
    for (const auto& z : cluster.roots()) CHECK(std::abs(z) < 1e-4);

    const auto cubic = derivative_roots_complex(ComplexRootSet({{0.0, 0.0}, {1.0, 0.0}, {2.0, 0.0}}));
    REQUIRE(cubic.degree() == 2);
    CHECK(cubic.roots()[0].real() == doctest::Approx(1.0 - 1.0 / std::sqrt(3.0)).epsilon(1e-10));
    CHECK(cubic.roots()[1].real() == doctest::Approx(1.0 + 1.0 / std::sqrt(3.0)).epsilon(1e-10));
    CHECK(std::abs(cubic.roots()[0].imag()) < 1e-12);
}

TEST_CASE("derivative: exact multiplicity copies") {
    const double c = 0.7;
    const auto out = derivative_roots_complex(ComplexRootSet({{c, 0.0}, {c, 0.0}}));
    REQUIRE(out.degree() == 1);
    CHECK(out.roots()[0] == cplx{c, 0.0});

    // (z-a)^2 (z-b): derivative roots {a, (2b+a)/3}
    const double a = -0.5, b = 1.0;
    const auto two = derivative_roots_complex(ComplexRootSet({{a, 0.0}, {a, 0.0}, {b, 0.0}}));
    REQUIRE(two.degree() == 2);
    CHECK(two.roots()[0] == cplx{a, 0.0});
    CHECK(two.roots()[1].real() == doctest::Approx((2.0 * b + a) / 3.0).epsilon(1e-11));
}

TEST_CASE("derivative preconditions") {
    CHECK_THROWS_AS(derivative_roots_complex(ComplexRootSet(std::vector<cplx>{{1.0, 0.0}})), domain_error);
    CHECK_THROWS_AS(ComplexRootSet(std::vector<cplx>{}), domain_error);
    CHECK_THROWS_AS(ComplexRootSet(std::vector<cplx>{{std::nan(""), 0.0}}), domain_error);
}

TEST_CASE("real-line consistency with the weighted real engine") {
    Rng rng(1201);
    for (int rep = 0; rep < 30; ++rep) {
        const int n = 2 + static_cast<int>(rng.below(9));
        std::vector<double> roots(static_cast<std::size_t>(n));
        for (auto& x : roots) x = rng.uniform(-2.0, 2.0);
        std::sort(roots.begin(), roots.end());

        std::vector<cplx> as_complex;
        for (double x : roots) as_complex.emplace_back(x, 0.0);
        const auto complex_out = derivative_roots_complex(ComplexRootSet(as_complex));
        const auto real_out =
            weighted_derivative_roots({roots, std::vector<double>(roots.size(), 1.0)});
        REQUIRE(complex_out.degree() == static_cast<int>(real_out.roots.size()));
        for (std::size_t i = 0; i < real_out.roots.size(); ++i) {
            CHECK(std::fabs(complex_out.roots()[i].real() - real_out.roots[i]) <= 1e-10);
            CHECK(std::fabs(complex_out.roots()[i].imag()) <= 1e-10);
        }
    }
}

TEST_CASE("structure preservation: one full cycle against the radial engine") {
    Rng rng(1301);
    for (const auto& [n, m] : {std::pair<int, int>{3, 5}, {2, 7}, {4, 4}, {5, 3}}) {
        const auto radii = random_ladder(rng, n, 0.5, 2.0);
        ComplexRootSet set = circle_points(radii, m);
        for (int k = 0; k < m; ++k) set = derivative_roots_complex(set);
        const auto reference = differentiate_k(RadialState::from_radii(radii, m), m);
        REQUIRE(reference.q() == 0);
        const auto ref_radii = radii_view(reference).radii;
        const auto mods = sorted_moduli(set);
        REQUIRE(mods.size() == ref_radii.size() * static_cast<std::size_t>(m));
        for (std::size_t j = 0; j < ref_radii.size(); ++j)
            for (int k = 0; k < m; ++k)
                CHECK(std::fabs(mods[j * m + static_cast<std::size_t>(k)] - ref_radii[j]) <=
                      1e-8 * ref_radii[j]);
    }
}

TEST_CASE("circular derivative: hand algebra at N = 1 and N = 2") {
    const double a = 0.8;
    const auto flip = circular_derivative(ComplexRootSet(std::vector<cplx>{{a, 0.0}}));
    REQUIRE(flip.degree() == 1);
    CHECK(std::abs(flip.roots()[0] - cplx{-a, 0.0}) < 1e-12);

    const double r = 1.3;
    const auto rot = circular_derivative(ComplexRootSet({{r, 0.0}, {-r, 0.0}}));
    REQUIRE(rot.degree() == 2);
    auto by_imag = rot.roots();
    std::sort(by_imag.begin(), by_imag.end(),
              [](cplx a, cplx b) { return a.imag() < b.imag(); });
    CHECK(std::abs(by_imag[0] - cplx{0.0, -r}) < 1e-10);
    CHECK(std::abs(by_imag[1] - cplx{0.0, r}) < 1e-10);
}

TEST_CASE("circular derivative: one circle stays a circle, geometric mean exact") {
    const double R = 2.0;
    const int m = 6;
    auto set = circle_points({R}, m);
    for (int step = 0; step < 5; ++step) {
        set = circular_derivative(set);
        for (const auto& z : set.roots())
            CHECK(std::abs(z) == doctest::Approx(R).epsilon(1e-10));
    }
}

TEST_CASE("circular derivative conserves |prod roots| on random sets") {
    Rng rng(1409);
    for (int rep = 0; rep < 10; ++rep) {
        std::vector<cplx> pts;
        const int n = 6 + static_cast<int>(rng.below(10));
        for (int i = 0; i < n; ++i)
            pts.push_back(std::polar(rng.uniform(0.5, 2.0), rng.uniform(0.0, 2.0 * kPi)));
        ComplexRootSet set(pts);
        double before = 0.0;
        for (const auto& z : set.roots()) before += std::log(std::abs(z));
        const auto after_set = circular_derivative(set);
        double after = 0.0;
        for (const auto& z : after_set.roots()) after += std::log(std::abs(z));
        CHECK(std::fabs(after - before) / n < 1e-9);
        CHECK(after_set.degree() == set.degree());
    }
}

TEST_CASE("circular derivative rejects mismatched operator order") {
    CHECK_THROWS_AS(circular_derivative(ComplexRootSet(std::vector<cplx>{{1.0, 0.0}}), 2), domain_error);
}

TEST_CASE("perturb_arguments: rotation only") {
    Rng rng(1511);
    std::vector<cplx> pts;
    for (int i = 0; i < 40; ++i)
        pts.push_back(std::polar(rng.uniform(0.5, 2.0), rng.uniform(0.0, 2.0 * kPi)));
    const ComplexRootSet set(pts);

    const auto same = perturb_arguments(set, 0.0, 5);
    for (int i = 0; i < set.degree(); ++i) CHECK(same.roots()[i] == set.roots()[i]);

    const double scale = 0.1;
    const auto moved = perturb_arguments(set, scale, 5);
    for (int i = 0; i < set.degree(); ++i) {
        CHECK(std::abs(moved.roots()[i]) ==
              doctest::Approx(std::abs(set.roots()[i])).epsilon(1e-14));
        const double dtheta =
            std::arg(moved.roots()[i] / set.roots()[i]);
        CHECK(std::fabs(dtheta) <= scale * (1 + 1e-12));
    }
    // deterministic per seed
    const auto again = perturb_arguments(set, scale, 5);
    CHECK(again.roots() == moved.roots());
    CHECK(perturb_arguments(set, scale, 6).roots() != moved.roots());
}

TEST_CASE("sample_iid_arguments: moduli multiset is the ladder repeated m times") {
    const std::vector<double> radii{0.5, 1.0, 1.5};
    const int m = 7;
    const auto set = sample_iid_arguments(radii, m, 42);
    REQUIRE(set.degree() == static_cast<int>(radii.size()) * m);
    auto mods = sorted_moduli(set);
    for (std::size_t j = 0; j < radii.size(); ++j)
        for (int k = 0; k < m; ++k)
            CHECK(mods[j * m + static_cast<std::size_t>(k)] ==
                  doctest::Approx(radii[j]).epsilon(1e-14));
    CHECK(sample_iid_arguments(radii, m, 42).roots() == set.roots());
}

TEST_CASE("near_collision_count") {
    const ComplexRootSet sparse({{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}});
    CHECK(near_collision_count(sparse) == 0);
    const ComplexRootSet tight({{0.0, 0.0}, {1e-12, 0.0}, {1.0, 0.0}});
    CHECK(near_collision_count(tight) == 1);
}

TEST_CASE("sum rule holds across a long derivative cascade") {
    Rng rng(1607);
    std::vector<cplx> pts;
    for (int i = 0; i < 30; ++i)
        pts.push_back(std::polar(rng.uniform(0.3, 2.0), rng.uniform(0.0, 2.0 * kPi)));
    ComplexRootSet set(pts);
    for (int step = 0; step < 12; ++step) {
        cplx sum_before{0.0, 0.0};
        for (const auto& z : set.roots()) sum_before += z;
        const int deg = set.degree();
        set = derivative_roots_complex(set);
        cplx sum_after{0.0, 0.0};
        for (const auto& z : set.roots()) sum_after += z;
        const cplx expected = sum_before * (static_cast<double>(deg - 1) / deg);
        CHECK(std::abs(sum_after - expected) < 1e-9);
    }
}
