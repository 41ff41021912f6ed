#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "allpay/ironing.hpp"
#include "allpay/virtual_values.hpp"

using namespace allpay;

namespace {

const MixtureSpec kMixture{{{1.0, 2.0, 0.75}, {2.0, 3.0, 0.25}}};

TabulatedSpec random_tabulated(std::mt19937_64& gen) {
    std::uniform_int_distribution<int> knots(3, 8);
    std::uniform_real_distribution<double> step(0.05, 1.0);
    int k = knots(gen);
    std::vector<double> v{0.0};
    std::vector<double> c{0.0};
    for (int i = 1; i < k; ++i) {
        v.push_back(v.back() + step(gen));
        c.push_back(c.back() + step(gen));
    }
    TabulatedSpec t;
    for (int i = 0; i < k; ++i) t.points.push_back({v[i], c[i] / c.back()});
    t.points.back()[1] = 1.0;
    return t;
}

// Upper hull by an independent scan: from each hull vertex, the next vertex
// is the point with the largest slope ahead of it.
std::vector<std::size_t> upper_hull_scan(const std::vector<double>& x, const std::vector<double>& y) {
    std::vector<std::size_t> hull{0};
    while (hull.back() + 1 < x.size()) {
        std::size_t i = hull.back();
        std::size_t best = i + 1;
        double best_slope = (y[best] - y[i]) / (x[best] - x[i]);
        for (std::size_t j = i + 2; j < x.size(); ++j) {
            double s = (y[j] - y[i]) / (x[j] - x[i]);
            if (s >= best_slope) {
                best_slope = s;
                best = j;
            }
        }
        hull.push_back(best);
    }
    return hull;
}

void check_invariants(const IronedCurve& ic) {
    const auto& c = ic.curve;
    double scale = 0.0;
    for (double r : c.R) scale = std::max(scale, std::abs(r));
    for (std::size_t i = 0; i < c.q.size(); ++i) REQUIRE(ic.envelope[i] <= c.R[i] + 1e-12 * std::max(1.0, scale));
    for (std::size_t i = 1; i + 1 < c.q.size(); ++i) {
        double s0 = (ic.envelope[i] - ic.envelope[i - 1]) / (c.q[i] - c.q[i - 1]);
        double s1 = (ic.envelope[i + 1] - ic.envelope[i]) / (c.q[i + 1] - c.q[i]);
        REQUIRE(s1 >= s0 - 1e-7 * std::max(1.0, std::abs(s0)));
    }
    CHECK(nondecreasing(ic.psi_bar));
    for (std::size_t k = 0; k < ic.ironed_runs.size(); ++k) {
        auto [a, b] = ic.ironed_runs[k];
        for (std::size_t i = a; i <= b; ++i) REQUIRE(ic.psi_bar[i] == ic.psi_bar[a]);
    }
}

} // namespace

TEST_CASE("lower hull") {
    std::vector<double> x{0, 1, 2, 3, 4};
    std::vector<double> y{0, -1, 1, -0.5, 2};
    auto h = lower_hull(x, y);
    CHECK(h == std::vector<std::size_t>{0, 1, 3, 4});
    std::vector<double> line{0, 1, 2, 3, 4};
    CHECK(lower_hull(x, line) == std::vector<std::size_t>{0, 4});
}

TEST_CASE("convex input is its own envelope") {
    QuantileCurve c;
    c.n = 2;
    for (int i = 0; i <= 100; ++i) {
        double q = i / 100.0;
        c.q.push_back(q);
        c.R.push_back(std::max({-q, 0.5 * q - 0.3, 3.0 * q - 2.5}));
        c.psi.push_back(0.0);
    }
    IronedCurve ic = convex_envelope(c);
    for (std::size_t i = 0; i < c.q.size(); ++i) CHECK(ic.envelope[i] == doctest::Approx(c.R[i]).epsilon(1e-14));
    CHECK(ic.ironed_runs.empty());
}

TEST_CASE("uniform antiderivative has the closed form") {
    Distribution u(UniformSpec{0.0, 1.0});
    QuantileCurve c = antiderivative_in_quantile(u, 2);
    double q0 = c.q.front();
    auto exact = [&](double q) { return 0.5 * q * q * q - 0.5 * q - (0.5 * q0 * q0 * q0 - 0.5 * q0); };
    for (std::size_t i = 0; i < c.q.size(); i += 97) CHECK(std::abs(c.R[i] - exact(c.q[i])) < 1e-8);
    CHECK(std::abs(c.R.back()) < 1e-8);
    CHECK_THROWS(antiderivative_in_quantile(u, 2, 100));
}

TEST_CASE("regular distributions are not ironed") {
    for (int n : {1, 2, 3, 5, 10}) {
        Distribution u(UniformSpec{0.0, 1.0});
        IronedCurve ic = iron(u, n);
        CHECK(ic.ironed_intervals.empty());
        for (std::size_t i = 0; i < ic.psi_bar.size(); ++i) {
            REQUIRE(ic.psi_bar[i] == doctest::Approx(ic.curve.psi[i]).epsilon(1e-12));
        }
        for (double v : {0.05, 0.3, 0.8, 0.95}) {
            CHECK(ironed_mp_virtual_value(ic, u, n, v) == doctest::Approx(mp_virtual_value(u, n, v)).epsilon(1e-6));
        }
    }
}

TEST_CASE("mixture example") {
    Distribution d(kMixture);
    IronedCurve ic = iron(d, 2);
    check_invariants(ic);
    REQUIRE(ic.ironed_intervals.size() == 1);
    CHECK(ic.ironed_intervals[0].lo == doctest::Approx(1.918).epsilon(0.01 / 1.918));
    CHECK(ic.ironed_intervals[0].hi == doctest::Approx(2.167).epsilon(0.01 / 2.167));
    // At the tangent points the ironed value meets the raw virtual value.
    double level = ic.ironed_levels[0];
    CHECK(mp_virtual_value(d, 2, ic.ironed_intervals[0].lo) == doctest::Approx(level).epsilon(1e-6));
    CHECK(mp_virtual_value(d, 2, ic.ironed_intervals[0].hi) == doctest::Approx(level).epsilon(1e-6));
    CHECK(ironed_mp_virtual_value(ic, d, 2, 2.0) ==
          doctest::Approx(ironed_mp_virtual_value(ic, d, 2, 1.9185)).epsilon(1e-4));

    double prev = -INFINITY;
    for (int k = 1; k < 400; ++k) {
        double v = 1.0 + 2.0 * k / 400.0;
        double x = ironed_mp_virtual_value(ic, d, 2, v);
        REQUIRE(x >= prev - 1e-12);
        prev = x;
    }
}

TEST_CASE("orientation: R + quantile(q)(1 - q^n)/n is constant") {
    Distribution d(kMixture);
    for (int n : {2, 3, 5}) {
        QuantileCurve c = antiderivative_in_quantile(d, n);
        double lo = INFINITY;
        double hi = -INFINITY;
        for (std::size_t i = 0; i < c.q.size(); ++i) {
            double s = c.R[i] + d.quantile(c.q[i]) * (1.0 - std::pow(c.q[i], n)) / n;
            lo = std::min(lo, s);
            hi = std::max(hi, s);
        }
        CHECK(hi - lo < 1e-4);
    }
}

TEST_CASE("orientation: concave envelope of R(1) - R gives the same ironed set") {
    Distribution d(kMixture);
    IronedCurve ic = iron(d, 2);
    const auto& c = ic.curve;
    std::vector<double> flipped(c.R.size());
    for (std::size_t i = 0; i < c.R.size(); ++i) flipped[i] = c.R.back() - c.R[i];
    auto hull = upper_hull_scan(c.q, flipped);
    std::vector<std::pair<std::size_t, std::size_t>> gaps;
    for (std::size_t k = 0; k + 1 < hull.size(); ++k) {
        if (hull[k + 1] - hull[k] > 1) gaps.push_back({hull[k], hull[k + 1]});
    }
    REQUIRE(gaps.size() == 1);
    REQUIRE(ic.ironed_q_intervals.size() == 1);
    double cell = c.q[1] - c.q[0];
    CHECK(std::abs(c.q[gaps[0].first] - ic.ironed_q_intervals[0].lo) <= cell);
    CHECK(std::abs(c.q[gaps[0].second] - ic.ironed_q_intervals[0].hi) <= cell);
}

// On this mixture the ironed interval narrows as n grows: both tangent
// points move inward. Endpoints solve the two-point tangency conditions
// psi(a) = psi(b) = (R(b) - R(a)) / (b - a) in 30-digit arithmetic, with R in
// closed form.
TEST_CASE("mixture ironed interval for larger n") {
    Distribution d(kMixture);
    struct Case {
        int n;
        double lo;
        double hi;
    };
    std::vector<Case> cases{{2, 1.917905997, 2.167082249}, {3, 1.931042285, 2.148698220}, {5, 1.936517187, 2.139528865}};
    std::vector<Interval> found;
    for (const auto& c : cases) {
        IronedCurve ic = iron(d, c.n);
        REQUIRE(ic.ironed_intervals.size() == 1);
        CHECK(std::abs(ic.ironed_intervals[0].lo - c.lo) < 1e-7);
        CHECK(std::abs(ic.ironed_intervals[0].hi - c.hi) < 1e-7);
        found.push_back(ic.ironed_q_intervals[0]);
    }
    for (std::size_t k = 1; k < found.size(); ++k) {
        CHECK(found[k].lo >= found[k - 1].lo);
        CHECK(found[k].hi <= found[k - 1].hi);
    }
}

TEST_CASE("random tabulated distributions satisfy the envelope invariants") {
    std::mt19937_64 gen(2024);
    for (int trial = 0; trial < 15; ++trial) {
        Distribution d(random_tabulated(gen));
        for (int n : {2, 3, 5}) {
            IronedCurve ic = iron(d, n, 2048);
            check_invariants(ic);
            for (std::size_t k = 0; k < ic.ironed_intervals.size(); ++k) {
                CHECK(ic.ironed_intervals[k].lo < ic.ironed_intervals[k].hi);
            }
        }
    }
}
