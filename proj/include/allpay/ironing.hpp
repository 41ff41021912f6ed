#pragma once

#include <vector>

#include "allpay/distribution.hpp"

namespace allpay {

inline constexpr int kDefaultIroningGrid = 8192;
inline constexpr double kQuantileClip = 1e-10;

/// Antiderivative of the maximum-payment virtual value in quantile space,
/// R(q) = integral from the lower clip to q of psi_n(quantile(t)) dt.
struct QuantileCurve {
    int n = 0;
    std::vector<double> q;
    std::vector<double> psi; ///< psi_n(quantile(q)) at each node
    std::vector<double> R;
};

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

/// Lower convex envelope of R and its slope.
struct IronedCurve {
    QuantileCurve curve;
    std::vector<double> envelope;
    std::vector<double> psi_bar;
    /// Ironed runs in quantile space, endpoints refined to the tangent points.
    std::vector<Interval> ironed_q_intervals;
    /// The same runs mapped to value space.
    std::vector<Interval> ironed_intervals;
    /// Constant ironed value over each run. With a distribution this is the
    /// mean of psi over the refined run, which is where psi meets it at both
    /// tangent points; otherwise the grid envelope slope.
    std::vector<double> ironed_levels;
    /// Grid index ranges [first, last] of the points strictly below R.
    std::vector<std::pair<std::size_t, std::size_t>> ironed_runs;
};

/// Trapezoidal cumulative integral on an equispaced q grid of grid_size
/// points spanning [kQuantileClip, 1 - kQuantileClip].
QuantileCurve antiderivative_in_quantile(const Distribution& d, int n,
                                         int grid_size = kDefaultIroningGrid);

/// Lower convex hull of sampled points (x strictly increasing), as indices
/// into the input. Monotone chain; collinear interior points are dropped.
std::vector<std::size_t> lower_hull(const std::vector<double>& x, const std::vector<double>& y);

/// Builds the envelope, ironed virtual value and ironed intervals. When d is
/// supplied the run endpoints are refined by bisection on psi_n = level
/// between grid cells, then polished against exact quadrature of psi_n, and
/// mapped to value space; without d the value-space intervals are left empty.
IronedCurve convex_envelope(const QuantileCurve& curve, const Distribution* d = nullptr);

/// Convenience: antiderivative + envelope.
IronedCurve iron(const Distribution& d, int n, int grid_size = kDefaultIroningGrid);

/// Ironed maximum-payment virtual value at v.
double ironed_mp_virtual_value(const IronedCurve& ic, const Distribution& d, int n, double v);

} // namespace allpay
