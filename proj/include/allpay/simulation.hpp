#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "allpay/contest.hpp"
#include "allpay/distribution.hpp"

namespace allpay {

struct SimulationReport {
    std::uint64_t trials = 0;
    double mp_mean = 0.0;
    double mp_stderr = 0.0;
    double rev_mean = 0.0;
    double rev_stderr = 0.0;
    /// Reward share received by one top bidder (1/k for a k-way tie, 0 when
    /// the reward is withheld), averaged over trials.
    double mean_winner_share = 0.0;
    /// Mean of bid / skill over all contestants and trials.
    double mean_effort = 0.0;
    std::uint64_t seed = 0;
};

/// One simulated contest, passed to an optional observer.
struct TrialRecord {
    std::uint64_t trial = 0;
    std::span<const double> skills;
    std::span<const double> bids;
    double max_bid = 0.0;
    double sum_bids = 0.0;
};

using TrialObserver = std::function<void(const TrialRecord&)>;

/// Snaps a bid that falls inside a forbidden interval to its allowed bid.
double snap_bid(double bid, std::span<const ForbiddenInterval> forbidden);

/// Monte Carlo run of the equilibrium. Trial t draws its skills from
/// CounterRng(seed, t), so results do not depend on how trials are split
/// across workers. With an observer the trials run sequentially in order.
SimulationReport simulate(const Distribution& d, int n, const ContestSpec& c, std::uint64_t trials,
                          std::uint64_t seed, const TrialObserver& observer = {});

struct ConvergenceRow {
    std::uint64_t trials = 0;
    double mp_mean = 0.0;
    double mp_stderr = 0.0;
    double abs_error = 0.0;
    bool within_3se = false;
};

struct ConvergenceTable {
    double quadrature_mp = 0.0;
    std::vector<ConvergenceRow> rows;
    /// Every rung within 3 standard errors of the quadrature value, and
    /// stderr * sqrt(trials) stays within a factor 3 of the first rung.
    bool consistent = false;
};

ConvergenceTable convergence_check(const Distribution& d, int n, const ContestSpec& c,
                                   const std::vector<std::uint64_t>& trial_ladder, std::uint64_t seed);

} // namespace allpay
