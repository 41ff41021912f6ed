#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "allpay/distribution.hpp"
#include "allpay/equilibrium.hpp"
#include "allpay/ironing.hpp"

namespace allpay {

/// A bid range no equilibrium bid occupies. Submitted bids inside it are
/// rounded down to `allowed_bid`. For the interval just below a plateau the
/// target is its own lower end: a snapped bid there beats every continuous
/// bid below and loses to the plateau, which is the limit of bidding just
/// under the interval.
struct ForbiddenInterval {
    double lo = 0.0;
    double hi = 0.0;
    bool lo_closed = true;
    bool hi_closed = false;
    double allowed_bid = 0.0;

    bool contains(double bid) const {
        bool above = lo_closed ? bid >= lo : bid > lo;
        bool below = hi_closed ? bid <= hi : bid < hi;
        return above && below;
    }
};

/// Highest (rounded) bid wins; ties split the reward equally; bids under the
/// reserve bid are not served. `reserve_value` and `pooling` describe the
/// same rule in value space and are what the evaluators use.
struct SymmetricHighestWins {
    int n = 2;
    double reserve_bid = 0.0;
    std::optional<double> reserve_value;
    std::vector<ForbiddenInterval> forbidden;
    std::vector<Interval> pooling;
    std::string tie_rule = "equal-split";
};

/// Predetermined rank-order division of the reward.
struct StaticPrizes {
    int n = 2;
    std::vector<double> prizes;
};

/// Two contestants, agent 1 favored: above `favored_agent_guarantee_value`
/// agent 1 always wins, otherwise the higher value wins subject to the
/// reserve value, ties to agent 2.
struct AsymmetricTwoAgent {
    double reserve_value = 0.0;
    double favored_agent_guarantee_value = 0.0;
};

using ContestSpec = std::variant<SymmetricHighestWins, StaticPrizes, AsymmetricTwoAgent>;

struct EvaluationReport {
    double mp_exact = 0.0;
    double rev_exact = 0.0;
    std::optional<double> mp_virtual_surplus;
    double utilization_ratio = 0.0;
    std::optional<double> opt_revenue;
    std::optional<double> approximation_ratio;
};

/// Plain highest-bid-wins contest with the given value reserve (use the
/// support lower end for no reserve).
SymmetricHighestWins highest_bid_wins(const Distribution& d, int n, double reserve_value);

/// Optimal symmetric contest: a reserve plus forbidden bid intervals derived
/// from the ironed virtual value. Throws NumericalFailure when the
/// (ironed) virtual value is negative everywhere.
SymmetricHighestWins design_optimal_contest(const Distribution& d, int n);

/// Reserve value of a symmetric contest; derived from the reserve bid when
/// not stored. May exceed the support (nobody is served).
double resolve_reserve_value(const Distribution& d, const SymmetricHighestWins& c);

/// Interim allocation of a symmetric contest.
InterimAllocation interim_allocation(const Distribution& d, const ContestSpec& c);

/// Contestant count of a spec (2 for the asymmetric rule).
int contestants(const ContestSpec& c);

/// Tabulated equilibrium bid function of a symmetric contest.
BidFunction equilibrium_bids(const Distribution& d, const ContestSpec& c, int grid_size = kDefaultBidGrid);

/// n times the integral of b(v) F(v)^(n-1) f(v): the highest-value agent
/// submits the best bid.
double expected_max_payment(const Distribution& d, int n, const ContestSpec& c);

/// n times the integral of x(v) psi_n(v) f(v).
double expected_max_payment_via_virtual_surplus(const Distribution& d, int n, const ContestSpec& c);

/// n times the integral of b(v) f(v).
double expected_revenue(const Distribution& d, int n, const ContestSpec& c);

/// Revenue of highest-value-wins with the monopoly reserve. Throws
/// InvalidParameter when d is not regular for revenue.
double optimal_revenue_benchmark(const Distribution& d, int n);

/// Fills an EvaluationReport; opt_revenue is left empty for distributions
/// that are irregular for revenue. Throws NumericalFailure when the maximum
/// payment is zero.
EvaluationReport ratios(const Distribution& d, int n, const ContestSpec& c);

struct StaticComparisonRow {
    std::vector<double> prizes;
    double mp = 0.0;
    double revenue = 0.0;
};

struct StaticComparison {
    std::vector<StaticComparisonRow> rows;
    double winner_take_all_mp = 0.0;
    /// Winner-take-all MP is at least every row's MP minus 1e-6.
    bool winner_take_all_is_max = false;
};

StaticComparison compare_static(const Distribution& d, int n, const std::vector<std::vector<double>>& prize_vectors);

/// Evaluation of the favored-agent two-contestant rule.
struct AsymmetricReport {
    EvaluationReport eval;
    double symmetric_mp = 0.0;
    double reserve_value = 0.0;
    double reserve_bid = 0.0;
    double guarantee_value = 0.0;
    /// Agent 1's bid just below the guarantee value: bids in
    /// [favored_low_bid, favored_high_bid) round down to favored_low_bid.
    double favored_low_bid = 0.0;
    /// Agent 1's bid at the guarantee value; at or above it agent 1 wins.
    double favored_high_bid = 0.0;
};

inline constexpr int kAsymmetricNodes = 2048;

AsymmetricReport evaluate_asymmetric(const Distribution& d, const AsymmetricTwoAgent& c,
                                     int nodes_per_axis = kAsymmetricNodes);

/// Per-agent interim allocations of the two-agent rule.
std::pair<InterimAllocation, InterimAllocation> asymmetric_allocations(const Distribution& d,
                                                                       const AsymmetricTwoAgent& c);

/// F(x) = x^1.5, reserve value psi_2^{-1}(0), agent 1 guaranteed above 0.75.
AsymmetricReport evaluate_asymmetric_example();

} // namespace allpay
