#include "allpay/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "allpay/error.hpp"

namespace allpay {

namespace {

constexpr int kMaxDepth = 48;
constexpr int kInitialPanels = 8;

struct Simpson {
    const RealFunction& f;

    double refine(double a, double fa, double m, double fm, double b, double fb,
                  double whole, double tol, int depth) const {
        double lm = 0.5 * (a + m);
        double rm = 0.5 * (m + b);
        double flm = f(lm);
        double frm = f(rm);
        double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        double delta = left + right - whole;
        if (depth >= kMaxDepth || std::abs(delta) <= 15.0 * tol || m <= a || b <= m) {
            return left + right + delta / 15.0;
        }
        double half = std::max(0.5 * tol, 1e-300);
        return refine(a, fa, lm, flm, m, fm, left, half, depth + 1) +
               refine(m, fm, rm, frm, b, fb, right, half, depth + 1);
    }

    double panel(double a, double b, double tol) const {
        double m = 0.5 * (a + b);
        double fa = f(a);
        double fm = f(m);
        double fb = f(b);
        double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        return refine(a, fa, m, fm, b, fb, whole, tol, 0);
    }
};

} // namespace

double integrate(const RealFunction& f, double a, double b, double abs_tol,
                 std::span<const double> breakpoints) {
    if (!(b > a)) return 0.0;
    if (!std::isfinite(a) || !std::isfinite(b)) {
        throw InvalidParameter("integrate: limits must be finite");
    }
    std::vector<double> cuts{a};
    for (double x : breakpoints) {
        if (x > a && x < b) cuts.push_back(x);
    }
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    // Several fixed panels per piece stop Simpson from accepting a symmetric
    // integrand on its first (coincidentally exact) estimate.
    const std::size_t pieces = cuts.size() - 1;
    const double tol = abs_tol / static_cast<double>(pieces * kInitialPanels);
    Simpson rule{f};
    double total = 0.0;
    for (std::size_t i = 0; i < pieces; ++i) {
        double lo = cuts[i];
        double width = (cuts[i + 1] - lo) / kInitialPanels;
        for (int k = 0; k < kInitialPanels; ++k) {
            double pa = lo + k * width;
            double pb = (k + 1 == kInitialPanels) ? cuts[i + 1] : lo + (k + 1) * width;
            total += rule.panel(pa, pb, tol);
        }
    }
    return total;
}

GaussRule gauss_legendre(int points) {
    if (points < 1) throw InvalidParameter("gauss_legendre: need at least one point");
    GaussRule rule;
    rule.nodes.resize(points);
    rule.weights.resize(points);
    const int half = (points + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Newton iteration on P_m from the Chebyshev-like initial guess.
        double x = std::cos(std::numbers::pi * (i + 0.75) / (points + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= points; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = points * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        rule.nodes[i] = -x;
        rule.nodes[points - 1 - i] = x;
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.weights[i] = w;
        rule.weights[points - 1 - i] = w;
    }
    return rule;
}

WeightedNodes composite_nodes(double a, double b, int total_cells, const GaussRule& rule,
                              std::span<const double> breakpoints) {
    std::vector<double> cuts{a};
    for (double x : breakpoints) {
        if (x > a && x < b) cuts.push_back(x);
    }
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    WeightedNodes out;
    const double span = b - a;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        double lo = cuts[i];
        double hi = cuts[i + 1];
        int cells = std::max(1, static_cast<int>(std::lround(total_cells * (hi - lo) / span)));
        double h = (hi - lo) / cells;
        for (int c = 0; c < cells; ++c) {
            double left = lo + c * h;
            double mid = left + 0.5 * h;
            for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
                out.x.push_back(mid + 0.5 * h * rule.nodes[k]);
                out.w.push_back(0.5 * h * rule.weights[k]);
            }
        }
    }
    return out;
}

} // namespace allpay
