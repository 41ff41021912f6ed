#include <algorithm>
#include <cmath>

#include "allpay/contest.hpp"
#include "allpay/error.hpp"
#include "allpay/quadrature.hpp"
#include "allpay/virtual_values.hpp"

namespace allpay {

std::pair<InterimAllocation, InterimAllocation> asymmetric_allocations(const Distribution& d,
                                                                       const AsymmetricTwoAgent& c) {
    const double r = c.reserve_value;
    const double g = c.favored_agent_guarantee_value;
    if (!(g >= r)) throw InvalidParameter("asymmetric contest: guarantee value must be at least the reserve value");

    InterimAllocation favored;
    favored.n = 2;
    favored.lo = d.support_lo();
    favored.hi = d.support_hi();
    favored.x = [d, r, g](double v) {
        if (v < r) return 0.0;
        if (v < g) return d.cdf(v);
        return 1.0;
    };
    favored.breakpoints = d.breakpoints();
    favored.breakpoints.push_back(r);
    favored.breakpoints.push_back(g);

    // Agent 2 wins when agent 1 is below the guarantee and below agent 2.
    InterimAllocation other = favored;
    other.x = [d, r, g](double v) {
        if (v < r) return 0.0;
        return d.cdf(std::min(v, g));
    };
    return {favored, other};
}

AsymmetricReport evaluate_asymmetric(const Distribution& d, const AsymmetricTwoAgent& c, int nodes_per_axis) {
    auto [favored, other] = asymmetric_allocations(d, c);
    const double r = c.reserve_value;
    const double g = c.favored_agent_guarantee_value;

    AsymmetricReport out;
    out.reserve_value = r;
    out.guarantee_value = g;
    out.reserve_bid = reserve_bid_from_value(d, 2, r);
    double Ig = allocation_integral(favored, favored.lo, g);
    out.favored_low_bid = g * favored(std::nextafter(g, -kInfinity)) - Ig;
    out.favored_high_bid = g * favored(g) - Ig;

    // Tensor-product Gauss-Legendre in quantile space, cells aligned with the
    // bid discontinuities so only the max() kink is smoothed over.
    constexpr int kRulePoints = 4;
    GaussRule rule = gauss_legendre(kRulePoints);
    std::vector<double> qb;
    for (double v : d.breakpoints()) qb.push_back(d.cdf(v));
    qb.push_back(d.cdf(r));
    qb.push_back(d.cdf(g));
    double q_hi = d.bounded() ? 1.0 : kTailQuantile;
    WeightedNodes nodes = composite_nodes(0.0, q_hi, nodes_per_axis / kRulePoints, rule, qb);

    const std::size_t m = nodes.x.size();
    std::vector<double> b1(m), b2(m);
    for (std::size_t i = 0; i < m; ++i) {
        double v = d.quantile(nodes.x[i]);
        b1[i] = bid_from_allocation(favored, v);
        b2[i] = bid_from_allocation(other, v);
    }
    double mp = 0.0;
    double rev = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < m; ++j) row += nodes.w[j] * std::max(b1[i], b2[j]);
        mp += nodes.w[i] * row;
        rev += nodes.w[i] * (b1[i] + b2[i]);
    }
    out.eval.mp_exact = mp;
    out.eval.rev_exact = rev;
    if (!(mp > 0.0)) throw NumericalFailure("evaluate_asymmetric: expected maximum payment is zero");
    out.eval.utilization_ratio = rev / mp;
    try {
        out.eval.opt_revenue = optimal_revenue_benchmark(d, 2);
        out.eval.approximation_ratio = *out.eval.opt_revenue / mp;
    } catch (const InvalidParameter&) {
    }
    out.symmetric_mp = expected_max_payment(d, 2, design_optimal_contest(d, 2));
    return out;
}

AsymmetricReport evaluate_asymmetric_example() {
    Distribution d(PowerSpec{1.5});
    AsymmetricTwoAgent c;
    c.reserve_value = mp_reserve_value(d, 2);
    c.favored_agent_guarantee_value = 0.75;
    return evaluate_asymmetric(d, c);
}

} // namespace allpay
