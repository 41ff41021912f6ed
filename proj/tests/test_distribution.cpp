#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "allpay/distribution.hpp"
#include "allpay/error.hpp"
#include "allpay/quadrature.hpp"
#include "allpay/rng.hpp"

using namespace allpay;

namespace {

std::vector<DistributionSpec> families() {
    return {UniformSpec{0.0, 1.0},
            UniformSpec{2.0, 5.0},
            ExponentialSpec{1.0},
            ExponentialSpec{3.5},
            PowerSpec{1.5},
            PowerSpec{0.4},
            MixtureSpec{{{1.0, 2.0, 0.75}, {2.0, 3.0, 0.25}}},
            TabulatedSpec{{{{0.0, 0.0}}, {{0.3, 0.2}}, {{0.7, 0.6}}, {{1.0, 1.0}}}}};
}

} // namespace

TEST_CASE("closed forms") {
    Distribution u(UniformSpec{2.0, 5.0});
    CHECK(u.cdf(3.0) == doctest::Approx(1.0 / 3.0));
    CHECK(u.pdf(4.0) == doctest::Approx(1.0 / 3.0));
    CHECK(u.quantile(0.5) == doctest::Approx(3.5));

    Distribution e(ExponentialSpec{2.0});
    CHECK(e.cdf(1.0) == doctest::Approx(1.0 - std::exp(-2.0)));
    CHECK(e.pdf(1.0) == doctest::Approx(2.0 * std::exp(-2.0)));
    CHECK(e.survival(30.0) == doctest::Approx(std::exp(-60.0)).epsilon(1e-12));
    CHECK_FALSE(e.bounded());
    CHECK(e.effective_hi() == doctest::Approx(-std::log(1e-10) / 2.0));

    Distribution p(PowerSpec{1.5});
    CHECK(p.cdf(0.25) == doctest::Approx(0.125));
    CHECK(p.pdf(0.25) == doctest::Approx(1.5 * 0.5));
    CHECK(p.quantile(0.125) == doctest::Approx(0.25));

    Distribution m(MixtureSpec{{{1.0, 2.0, 0.75}, {2.0, 3.0, 0.25}}});
    CHECK(m.cdf(1.5) == doctest::Approx(0.375));
    CHECK(m.cdf(2.5) == doctest::Approx(0.875));
    CHECK(m.pdf(1.5) == doctest::Approx(0.75));
    CHECK(m.pdf(2.5) == doctest::Approx(0.25));
    CHECK(m.quantile(0.875) == doctest::Approx(2.5));

    Distribution t(TabulatedSpec{{{{0.0, 0.0}}, {{0.3, 0.2}}, {{0.7, 0.6}}, {{1.0, 1.0}}}});
    CHECK(t.cdf(0.15) == doctest::Approx(0.1));
    CHECK(t.pdf(0.5) == doctest::Approx(1.0));
    CHECK(t.quantile(0.8) == doctest::Approx(0.85));
}

TEST_CASE("quantile inverts cdf on every family") {
    std::mt19937_64 gen(17);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (const auto& spec : families()) {
        Distribution d(spec);
        CAPTURE(kind_name(spec));
        for (int k = 0; k < 1000; ++k) {
            double q = u01(gen);
            REQUIRE(std::abs(d.cdf(d.quantile(q)) - q) < 1e-9);
        }
    }
}

TEST_CASE("density integrates to the cdf") {
    for (const auto& spec : families()) {
        Distribution d(spec);
        CAPTURE(kind_name(spec));
        // Start above the support end: Power(0.4) has an infinite density there.
        double lo = d.quantile(0.1);
        double mid = d.quantile(0.6);
        double mass = integrate([&](double v) { return d.pdf(v); }, lo, mid, 1e-12, d.breakpoints());
        CHECK(mass == doctest::Approx(0.5).epsilon(1e-8));
    }
}

TEST_CASE("cdf is monotone and bounded") {
    for (const auto& spec : families()) {
        Distribution d(spec);
        double prev = 0.0;
        for (int k = 0; k <= 500; ++k) {
            double v = d.support_lo() + (d.effective_hi() - d.support_lo()) * k / 500.0;
            double F = d.cdf(v);
            REQUIRE(F >= prev);
            REQUIRE(F <= 1.0);
            prev = F;
        }
    }
}

TEST_CASE("sampling matches the mean") {
    struct Case {
        DistributionSpec spec;
        double mean;
    };
    std::vector<Case> cases{{UniformSpec{0.0, 1.0}, 0.5},
                            {ExponentialSpec{2.0}, 0.5},
                            {PowerSpec{1.5}, 1.5 / 2.5},
                            {MixtureSpec{{{1.0, 2.0, 0.75}, {2.0, 3.0, 0.25}}}, 0.75 * 1.5 + 0.25 * 2.5}};
    for (const auto& c : cases) {
        Distribution d(c.spec);
        CounterRng g(42, 0);
        double sum = 0.0;
        const int N = 200000;
        for (int i = 0; i < N; ++i) sum += d.sample(g);
        CHECK(sum / N == doctest::Approx(c.mean).epsilon(0.01));
    }
}

TEST_CASE("invalid parameters are rejected") {
    CHECK_THROWS_AS(build(UniformSpec{1.0, 1.0}), InvalidParameter);
    CHECK_THROWS_AS(build(ExponentialSpec{0.0}), InvalidParameter);
    CHECK_THROWS_AS(build(ExponentialSpec{-1.0}), InvalidParameter);
    CHECK_THROWS_AS(build(PowerSpec{0.0}), InvalidParameter);
    CHECK_THROWS_AS(build(MixtureSpec{{{0.0, 1.0, 0.5}, {1.0, 2.0, 0.4}}}), InvalidParameter);
    CHECK_THROWS_AS(build(MixtureSpec{{{0.0, 1.0, 0.5}, {1.5, 2.0, 0.5}}}), InvalidParameter);
    CHECK_THROWS_AS(build(MixtureSpec{}), InvalidParameter);
    CHECK_THROWS_AS(build(TabulatedSpec{{{{0.0, 0.0}}, {{0.5, 0.7}}, {{0.4, 1.0}}}}), InvalidParameter);
    CHECK_THROWS_AS(build(TabulatedSpec{{{{0.0, 0.1}}, {{1.0, 1.0}}}}), InvalidParameter);
    CHECK_THROWS_AS(build(TabulatedSpec{{{{0.0, 0.0}}, {{0.5, 0.5}}, {{0.6, 0.5}}, {{1.0, 1.0}}}}), InvalidParameter);
    Distribution u(UniformSpec{0.0, 1.0});
    CHECK_THROWS_AS(u.quantile(1.5), InvalidParameter);
}

TEST_CASE("breakpoints") {
    Distribution m(MixtureSpec{{{1.0, 2.0, 0.75}, {2.0, 3.0, 0.25}}});
    REQUIRE(m.breakpoints().size() >= 1);
    bool has_two = false;
    for (double b : m.breakpoints()) has_two = has_two || b == 2.0;
    CHECK(has_two);
}
