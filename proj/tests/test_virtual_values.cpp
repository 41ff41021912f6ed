#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "allpay/error.hpp"
#include "allpay/virtual_values.hpp"

using namespace allpay;

TEST_CASE("uniform virtual values") {
    Distribution u(UniformSpec{0.0, 1.0});
    for (double v : {0.1, 0.37, 0.5, 0.93}) {
        CHECK(revenue_virtual_value(u, v) == doctest::Approx(2.0 * v - 1.0));
        CHECK(hazard_rate(u, v) == doctest::Approx(1.0 / (1.0 - v)));
        for (int n : {2, 3, 7}) {
            double expected = std::pow(v, n) - (1.0 - std::pow(v, n)) / n;
            CHECK(mp_virtual_value(u, n, v) == doctest::Approx(expected).epsilon(1e-13));
        }
        CHECK(mp_virtual_value(u, 1, v) == doctest::Approx(revenue_virtual_value(u, v)));
    }
}

TEST_CASE("exponential closed forms") {
    Distribution e(ExponentialSpec{1.0});
    for (int k = 1; k <= 100; ++k) {
        double z = 0.1 * k;
        CHECK(std::abs(mp_virtual_value(e, 2, z) - ((z - 1.0) + std::exp(-z) * (0.5 - z))) < 1e-12);
        CHECK(revenue_virtual_value(e, z) == doctest::Approx(z - 1.0));
        CHECK(hazard_rate(e, z) == doctest::Approx(1.0));
    }
}

TEST_CASE("out of support") {
    Distribution u(UniformSpec{0.0, 1.0});
    CHECK_THROWS_AS(mp_virtual_value(u, 2, 1.5), OutOfSupport);
    CHECK_THROWS_AS(revenue_virtual_value(u, -0.1), OutOfSupport);
    CHECK_THROWS_AS(hazard_rate(u, 1.0), OutOfSupport);
    CHECK_THROWS_AS(mp_virtual_value(u, 0, 0.5), InvalidParameter);
}

TEST_CASE("reserve values") {
    Distribution u(UniformSpec{0.0, 1.0});
    CHECK(monopoly_reserve_value(u) == doctest::Approx(0.5).epsilon(1e-12));
    for (int n : {2, 3, 5, 10}) {
        CHECK(mp_reserve_value(u, n) == doctest::Approx(std::pow(n + 1.0, -1.0 / n)).epsilon(1e-12));
    }
    Distribution p(PowerSpec{1.5});
    CHECK(monopoly_reserve_value(p) == doctest::Approx(std::pow(0.4, 2.0 / 3.0)).epsilon(1e-12));
    // psi_2 = z^2.5 - (1 - z^3) / (3 sqrt z) vanishes where 4 z^3 = 1.
    CHECK(mp_reserve_value(p, 2) == doctest::Approx(std::cbrt(0.25)).epsilon(1e-12));
    Distribution e(ExponentialSpec{1.0});
    CHECK(monopoly_reserve_value(e) == doctest::Approx(1.0).epsilon(1e-12));
    double r = mp_reserve_value(e, 2);
    CHECK(std::abs(mp_virtual_value(e, 2, r)) < 1e-12);
    CHECK(r == doctest::Approx(1.21).epsilon(0.005));
}

TEST_CASE("shape verdicts") {
    VirtualValueReport u = analyze(Distribution(UniformSpec{0.0, 1.0}), 2);
    CHECK(u.regular_for_revenue);
    CHECK(u.n_regular_for_mp);
    CHECK(u.mhr);
    REQUIRE(u.psi_nonneg_from.has_value());

    VirtualValueReport e = analyze(Distribution(ExponentialSpec{1.0}), 2);
    CHECK(e.regular_for_revenue);
    CHECK(e.mhr);
    CHECK_FALSE(e.n_regular_for_mp);
    CHECK(regular_on_nonnegative_region(e));
    REQUIRE(e.psi_nonneg_from.has_value());
    CHECK(*e.psi_nonneg_from == doctest::Approx(1.21).epsilon(0.01));
    std::vector<double> above;
    for (std::size_t i = 0; i < e.grid.size(); ++i) {
        if (e.grid[i] >= 0.24) above.push_back(e.psi[i]);
    }
    CHECK(nondecreasing(above));

    VirtualValueReport m = analyze(Distribution(MixtureSpec{{{1.0, 2.0, 0.75}, {2.0, 3.0, 0.25}}}), 2);
    CHECK_FALSE(m.regular_for_revenue);
    CHECK_FALSE(m.n_regular_for_mp);
    CHECK_FALSE(regular_on_nonnegative_region(m));
}

TEST_CASE("MHR implies psi nondecreasing where nonnegative") {
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> alpha(1.0, 4.0);
    std::uniform_real_distribution<double> rate(0.2, 5.0);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<DistributionSpec> specs{PowerSpec{alpha(gen)}, ExponentialSpec{rate(gen)},
                                            UniformSpec{rate(gen), rate(gen) + 6.0}};
        for (const auto& s : specs) {
            for (int n : {2, 3, 5}) {
                VirtualValueReport r = analyze(Distribution(s), n, 512);
                REQUIRE(r.mhr);
                CHECK(regular_on_nonnegative_region(r));
            }
        }
    }
}

TEST_CASE("n = 1 reduces to the revenue virtual value") {
    Distribution m(MixtureSpec{{{1.0, 2.0, 0.75}, {2.0, 3.0, 0.25}}});
    for (double v : {1.2, 1.99, 2.01, 2.9}) {
        CHECK(mp_virtual_value(m, 1, v) == doctest::Approx(revenue_virtual_value(m, v)).epsilon(1e-14));
    }
}
