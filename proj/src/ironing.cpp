#include "allpay/ironing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "allpay/error.hpp"
#include "allpay/quadrature.hpp"
#include "allpay/roots.hpp"
#include "allpay/virtual_values.hpp"

namespace allpay {

namespace {

// Quantile pulled strictly inside the support so psi is defined.
double inner_quantile(const Distribution& d, double q) {
    double v = d.quantile(q);
    if (!(v > d.support_lo())) v = std::nextafter(d.support_lo(), kInfinity);
    if (!(v < d.support_hi())) v = std::nextafter(d.support_hi(), -kInfinity);
    return v;
}

// Refines a tangent point near grid index `at`: the root of psi(q) - level in
// the cells adjacent to it, when psi crosses the level there.
double refine_tangent(const Distribution& d, const QuantileCurve& c, std::size_t at, double level) {
    std::size_t lo = at == 0 ? 0 : at - 1;
    std::size_t hi = std::min(at + 1, c.q.size() - 1);
    auto g = [&](double q) { return mp_virtual_value(d, c.n, inner_quantile(d, q)) - level; };
    double glo = c.psi[lo] - level;
    double ghi = c.psi[hi] - level;
    if (lo == hi || (glo < 0.0) == (ghi < 0.0)) return c.q[at];
    return bisect(g, c.q[lo], c.q[hi]);
}

// Upcrossing of psi through `level` nearest to q0, searched cell by cell
// within `reach` cells either side. Returns q0 when none is found.
double upcrossing_near(const Distribution& d, int n, double q0, double cell, double level, int reach) {
    auto g = [&](double q) { return mp_virtual_value(d, n, inner_quantile(d, q)) - level; };
    const double qmin = kQuantileClip;
    const double qmax = 1.0 - kQuantileClip;
    for (int k = 0; k < reach; ++k) {
        for (int side : {-1, 1}) {
            double a = std::clamp(q0 + (side < 0 ? -(k + 1) : k) * cell, qmin, qmax);
            double b = std::clamp(a + cell, qmin, qmax);
            if (b > a && g(a) < 0.0 && g(b) >= 0.0) return bisect(g, a, b);
        }
    }
    return q0;
}

// Polishes an ironed run [ql, qu]: the level is the exact mean of psi over
// the run and each end is moved to where psi meets it. The chord slope is
// stationary at the tangent points, so a few rounds settle well below the
// grid spacing.
void polish_run(const Distribution& d, int n, double cell, double& ql, double& qu, double& level,
                bool move_lo, bool move_hi) {
    std::vector<double> qb;
    for (double b : d.breakpoints()) qb.push_back(d.cdf(b));
    auto psi = [&](double q) { return mp_virtual_value(d, n, inner_quantile(d, q)); };
    for (int round = 0; round < 20; ++round) {
        level = integrate(psi, ql, qu, 1e-14, qb) / (qu - ql);
        double nl = move_lo ? upcrossing_near(d, n, ql, cell, level, 4) : ql;
        double nu = move_hi ? upcrossing_near(d, n, qu, cell, level, 4) : qu;
        bool settled = std::abs(nl - ql) < 1e-15 && std::abs(nu - qu) < 1e-15;
        ql = nl;
        qu = nu;
        if (settled) break;
    }
    level = integrate(psi, ql, qu, 1e-14, qb) / (qu - ql);
}

} // namespace

QuantileCurve antiderivative_in_quantile(const Distribution& d, int n, int grid_size) {
    if (n < 1) throw InvalidParameter("contestant count n must be at least 1");
    if (grid_size < 256) throw InvalidParameter("antiderivative_in_quantile: grid_size must be at least 256");
    QuantileCurve c;
    c.n = n;
    c.q.resize(grid_size);
    c.psi.resize(grid_size);
    c.R.resize(grid_size);
    const double lo = kQuantileClip;
    const double h = (1.0 - 2.0 * kQuantileClip) / (grid_size - 1);
    for (int i = 0; i < grid_size; ++i) {
        c.q[i] = (i + 1 == grid_size) ? 1.0 - kQuantileClip : lo + i * h;
        c.psi[i] = mp_virtual_value(d, n, inner_quantile(d, c.q[i]));
    }
    c.R[0] = 0.0;
    for (int i = 1; i < grid_size; ++i) {
        c.R[i] = c.R[i - 1] + 0.5 * (c.q[i] - c.q[i - 1]) * (c.psi[i] + c.psi[i - 1]);
    }
    return c;
}

std::vector<std::size_t> lower_hull(const std::vector<double>& x, const std::vector<double>& y) {
    std::vector<std::size_t> hull;
    hull.reserve(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        while (hull.size() >= 2) {
            std::size_t a = hull[hull.size() - 2];
            std::size_t b = hull.back();
            double cross = (x[b] - x[a]) * (y[i] - y[a]) - (y[b] - y[a]) * (x[i] - x[a]);
            if (cross <= 0.0) hull.pop_back();
            else break;
        }
        hull.push_back(i);
    }
    return hull;
}

IronedCurve convex_envelope(const QuantileCurve& curve, const Distribution* d) {
    const std::size_t m = curve.q.size();
    if (m < 2 || curve.R.size() != m || curve.psi.size() != m) {
        throw InvalidParameter("convex_envelope: malformed curve");
    }
    IronedCurve ic;
    ic.curve = curve;
    ic.envelope.resize(m);
    ic.psi_bar.resize(m);

    const auto& q = curve.q;
    const auto& R = curve.R;
    std::vector<std::size_t> hull = lower_hull(q, R);
    std::vector<double> slope(hull.size() - 1);
    for (std::size_t k = 0; k + 1 < hull.size(); ++k) {
        slope[k] = (R[hull[k + 1]] - R[hull[k]]) / (q[hull[k + 1]] - q[hull[k]]);
    }

    const double inf = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k + 1 < hull.size(); ++k) {
        std::size_t a = hull[k];
        std::size_t b = hull[k + 1];
        for (std::size_t i = a; i <= b; ++i) {
            ic.envelope[i] = (i == a) ? R[a] : (i == b) ? R[b] : R[a] + slope[k] * (q[i] - q[a]);
        }
        // Between vertices the slope is the chord; at a vertex psi is kept
        // when it lies between the adjacent chord slopes.
        for (std::size_t i = a + 1; i < b; ++i) ic.psi_bar[i] = slope[k];
        double left = k == 0 ? -inf : slope[k - 1];
        ic.psi_bar[a] = std::clamp(curve.psi[a], left, slope[k]);
    }
    {
        std::size_t last = hull.back();
        double left = hull.size() >= 2 ? slope.back() : -inf;
        ic.psi_bar[last] = std::max(curve.psi[last], left);
    }

    double scale = 0.0;
    for (double r : R) scale = std::max(scale, std::abs(r));
    const double threshold = 1e-9 * scale;

    for (std::size_t k = 0; k + 1 < hull.size(); ++k) {
        std::size_t a = hull[k];
        std::size_t b = hull[k + 1];
        if (b - a < 2) continue;
        double gap = 0.0;
        for (std::size_t i = a + 1; i < b; ++i) gap = std::max(gap, R[i] - ic.envelope[i]);
        if (!(gap > threshold)) continue;
        ic.ironed_runs.emplace_back(a + 1, b - 1);
        double ql = q[a];
        double qu = q[b];
        double level = slope[k];
        if (d != nullptr) {
            if (a > 0) ql = refine_tangent(*d, curve, a, slope[k]);
            if (b + 1 < m) qu = refine_tangent(*d, curve, b, slope[k]);
            polish_run(*d, curve.n, q[1] - q[0], ql, qu, level, a > 0, b + 1 < m);
        }
        ic.ironed_levels.push_back(level);
        ic.ironed_q_intervals.push_back({ql, qu});
        if (d != nullptr) {
            ic.ironed_intervals.push_back({d->quantile(ql), d->quantile(qu)});
        }
    }
    return ic;
}

IronedCurve iron(const Distribution& d, int n, int grid_size) {
    return convex_envelope(antiderivative_in_quantile(d, n, grid_size), &d);
}

double ironed_mp_virtual_value(const IronedCurve& ic, const Distribution& d, int n, double v) {
    if (!d.inside(v)) throw OutOfSupport("ironed_mp_virtual_value: value outside the open support");
    if (n != ic.curve.n) throw InvalidParameter("ironed_mp_virtual_value: n does not match the ironed curve");
    double q = d.cdf(v);
    for (std::size_t k = 0; k < ic.ironed_q_intervals.size(); ++k) {
        if (q >= ic.ironed_q_intervals[k].lo && q <= ic.ironed_q_intervals[k].hi) return ic.ironed_levels[k];
    }
    const auto& grid = ic.curve.q;
    double psi = mp_virtual_value(d, n, v);
    if (q <= grid.front()) return std::min(psi, ic.psi_bar.front());
    if (q >= grid.back()) return std::max(psi, ic.psi_bar.back());
    auto it = std::upper_bound(grid.begin(), grid.end(), q);
    std::size_t hi = static_cast<std::size_t>(it - grid.begin());
    std::size_t lo = hi - 1;
    return std::clamp(psi, ic.psi_bar[lo], ic.psi_bar[hi]);
}

} // namespace allpay
