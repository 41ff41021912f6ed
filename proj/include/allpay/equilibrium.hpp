#pragma once

#include <functional>
#include <span>
#include <vector>

#include "allpay/distribution.hpp"
#include "allpay/ironing.hpp"

namespace allpay {

inline constexpr int kDefaultBidGrid = 4096;

/// Expected reward share of a contestant with value v, in expectation over
/// the opponents. Zero below the support.
struct InterimAllocation {
    int n = 0;
    double lo = 0.0;
    double hi = 1.0;
    std::function<double(double)> x;
    /// Points where x may jump; quadrature never straddles them.
    std::vector<double> breakpoints;

    double operator()(double v) const { return v < lo ? 0.0 : x(v); }
};

/// Highest value wins, reward withheld below the reserve value:
/// x(v) = F(v)^(n-1) for v >= reserve.
InterimAllocation highest_wins_allocation(const Distribution& d, int n, double reserve_value);

/// Highest value wins above the reserve, except that values inside each
/// pooling interval [l, u] tie and split the reward equally, giving
/// x = (F(u)^n - F(l)^n) / (n (F(u) - F(l))) there.
InterimAllocation pooled_allocation(const Distribution& d, int n, double reserve_value,
                                    std::span<const Interval> pooling);

/// Rank-order prizes a_1..a_n: x(v) = sum_r C(n-1, r-1) (1-F)^(r-1) F^(n-r) a_r.
InterimAllocation static_prize_allocation(const Distribution& d, int n, std::span<const double> prizes);

/// Integral of x over [from, to].
double allocation_integral(const InterimAllocation& a, double from, double to);

/// Payment identity with zero payment at the bottom:
/// b(v) = v x(v) - integral_lo^v x(z) dz. Throws InvalidParameter when x
/// decreases by more than 1e-9 on a 257-point grid over [lo, v].
double bid_from_allocation(const InterimAllocation& a, double v);

/// Equilibrium bid of the highest-bid-wins all-pay contest with a value
/// reserve, computed as F(v)^(n-1) E[max(second highest, r) | v is highest]:
/// r F(r)^(n-1) + integral_r^v t d(F(t)^(n-1)). Zero below the reserve.
double allpay_bid_highest_wins(const Distribution& d, int n, double reserve_value, double v);

/// Bid-space reserve implementing a value reserve r: r F(r)^(n-1).
double reserve_bid_from_value(const Distribution& d, int n, double r);

/// Expected j-th highest of m i.i.d. draws from F truncated to [lo, z].
/// Requires 1 <= j <= m.
double order_stat_expectation(const Distribution& d, int j, int m, double z);

namespace detail {
/// Order-statistic expectation by quadrature of the truncated density in
/// quantile coordinates, valid for every rank.
double order_stat_expectation_quadrature(const Distribution& d, int j, int m, double z);
} // namespace detail

/// Symmetric equilibrium bid of the static rank-order contest with prizes
/// a_1..a_n (a_{n+1} = 0), written as a sum over the bidder's rank of the
/// rank probability times the expected threshold payment.
double static_contest_bid(const Distribution& d, int n, std::span<const double> prizes, double v);

/// Throws InvalidParameter unless prizes has n nonnegative entries summing to
/// 1 within 1e-9.
void validate_prizes(int n, std::span<const double> prizes);

/// True when a_1 >= a_2 >= ... >= a_n.
bool prizes_nonincreasing(std::span<const double> prizes);

/// Monotone tabulated bid function. Stretches where the allocation is
/// constant (below the reserve, pooled intervals) are stored as exact
/// plateaus so tied contestants submit bit-identical bids.
class BidFunction {
public:
    BidFunction() = default;

    /// Tabulates the payment-identity bid of `a` on grid_size
    /// quantile-equispaced values, splitting at the allocation breakpoints.
    static BidFunction tabulate(const Distribution& d, const InterimAllocation& a, double reserve_value,
                                int grid_size = kDefaultBidGrid);

    double operator()(double v) const;

    double reserve_value() const { return reserve_value_; }

    /// Flattened (value, bid) samples in increasing value order; a jump shows
    /// up as two samples at the same value.
    std::vector<double> grid() const;
    std::vector<double> bids() const;

private:
    struct Piece {
        double lo = 0.0;
        double hi = 0.0;
        bool constant = false;
        double x = 0.0;
        double level = 0.0;
        std::vector<double> v;
        std::vector<double> b;
    };

    std::vector<Piece> pieces_;
    double reserve_value_ = 0.0;
    double tab_hi_ = 0.0;
    InterimAllocation alloc_;
};

} // namespace allpay
