#pragma once

#include <functional>
#include <span>
#include <vector>

namespace allpay {

using RealFunction = std::function<double(double)>;

inline constexpr double kDefaultQuadTolerance = 1e-10;

/// Adaptive Simpson quadrature of f over [a, b] with an absolute error
/// target. The interval is split at every breakpoint strictly inside (a, b)
/// so jump discontinuities never sit inside a Simpson panel. Returns 0 when
/// b <= a.
double integrate(const RealFunction& f, double a, double b,
                 double abs_tol = kDefaultQuadTolerance,
                 std::span<const double> breakpoints = {});

/// Nodes and weights of an m-point Gauss-Legendre rule on [-1, 1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

GaussRule gauss_legendre(int points);

/// Composite Gauss-Legendre nodes on [a, b]: the interval is cut at the
/// supplied breakpoints, then each piece receives cells in proportion to its
/// length (at least one), each cell carrying `rule`. Used for tensor-product
/// integration where the integrand has known discontinuity lines.
struct WeightedNodes {
    std::vector<double> x;
    std::vector<double> w;
};

WeightedNodes composite_nodes(double a, double b, int total_cells, const GaussRule& rule,
                              std::span<const double> breakpoints = {});

} // namespace allpay
