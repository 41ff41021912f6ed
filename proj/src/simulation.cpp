#include "allpay/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "allpay/error.hpp"
#include "allpay/rng.hpp"

namespace allpay {

namespace {

constexpr std::uint64_t kChunk = 1u << 15;

struct Moments {
    double count = 0.0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) {
        count += 1.0;
        double delta = x - mean;
        mean += delta / count;
        m2 += delta * (x - mean);
    }

    void merge(const Moments& o) {
        if (o.count == 0.0) return;
        double total = count + o.count;
        double delta = o.mean - mean;
        mean += delta * o.count / total;
        m2 += o.m2 + delta * delta * count * o.count / total;
        count = total;
    }

    double stderr_of_mean() const {
        if (count < 2.0) return 0.0;
        return std::sqrt(m2 / (count - 1.0)) / std::sqrt(count);
    }
};

struct Partial {
    Moments mp;
    Moments rev;
    double share = 0.0;
    double effort = 0.0;
};

bool tied(double a, double b) {
    return a == b || std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b));
}

// Bid-space rules of one contest, shared read-only by all workers.
struct Game {
    int n = 0;
    std::vector<BidFunction> bid_of; // one per agent (symmetric: single entry)
    double reserve_bid = 0.0;
    std::vector<ForbiddenInterval> forbidden;
    std::vector<double> prizes; // static contests
    bool asymmetric = false;
    double favored_low = 0.0;
    double favored_high = 0.0;

    const BidFunction& bids_for(int agent) const { return bid_of[bid_of.size() == 1 ? 0 : agent]; }

    // Returns the winner share of one top bidder.
    double settle(std::span<const double> bids) const {
        if (asymmetric) {
            if (bids[0] >= favored_high) return 1.0;
            double best = std::max(bids[0], bids[1]);
            return best >= reserve_bid && best > 0.0 ? 1.0 : 0.0;
        }
        double best = *std::max_element(bids.begin(), bids.end());
        int k = 0;
        for (double b : bids) {
            if (tied(b, best)) ++k;
        }
        if (!prizes.empty()) {
            // Tied top bidders split the prizes of the ranks they occupy.
            double pool = 0.0;
            for (int i = 0; i < k; ++i) pool += prizes[i];
            return pool / k;
        }
        if (best < reserve_bid * (1.0 - 1e-12)) return 0.0;
        return 1.0 / k;
    }
};

Game make_game(const Distribution& d, int n, const ContestSpec& c) {
    Game g;
    g.n = n;
    if (const auto* asym = std::get_if<AsymmetricTwoAgent>(&c)) {
        if (n != 2) throw InvalidParameter("asymmetric contest has exactly two contestants");
        auto [favored, other] = asymmetric_allocations(d, *asym);
        g.bid_of.push_back(BidFunction::tabulate(d, favored, asym->reserve_value));
        g.bid_of.push_back(BidFunction::tabulate(d, other, asym->reserve_value));
        g.asymmetric = true;
        g.reserve_bid = reserve_bid_from_value(d, 2, asym->reserve_value);
        double gv = asym->favored_agent_guarantee_value;
        double Ig = allocation_integral(favored, favored.lo, gv);
        g.favored_low = gv * favored(std::nextafter(gv, -kInfinity)) - Ig;
        g.favored_high = gv * favored(gv) - Ig;
        return g;
    }
    if (contestants(c) != n) throw InvalidParameter("contest spec and n disagree");
    g.bid_of.push_back(equilibrium_bids(d, c));
    if (const auto* h = std::get_if<SymmetricHighestWins>(&c)) {
        g.reserve_bid = h->reserve_bid;
        g.forbidden = h->forbidden;
    } else if (const auto* s = std::get_if<StaticPrizes>(&c)) {
        g.prizes = s->prizes;
    }
    return g;
}

void run_trial(const Distribution& d, const Game& game, std::uint64_t seed, std::uint64_t t,
               std::vector<double>& skills, std::vector<double>& bids, Partial& acc, const TrialObserver* obs) {
    CounterRng gen(seed, t);
    double max_bid = 0.0;
    double sum_bids = 0.0;
    double effort = 0.0;
    for (int i = 0; i < game.n; ++i) {
        skills[i] = d.sample(gen);
        double b = game.bids_for(i)(skills[i]);
        b = snap_bid(b, game.forbidden);
        if (game.asymmetric && i == 0 && b >= game.favored_low && b < game.favored_high) b = game.favored_low;
        bids[i] = b;
        max_bid = std::max(max_bid, b);
        sum_bids += b;
        if (skills[i] > 0.0) effort += b / skills[i];
    }
    acc.mp.add(max_bid);
    acc.rev.add(sum_bids);
    acc.share += game.settle(bids);
    acc.effort += effort / game.n;
    if (obs != nullptr && *obs) {
        (*obs)(TrialRecord{t, skills, bids, max_bid, sum_bids});
    }
}

} // namespace

double snap_bid(double bid, std::span<const ForbiddenInterval> forbidden) {
    for (const ForbiddenInterval& f : forbidden) {
        if (f.contains(bid)) return f.allowed_bid;
    }
    return bid;
}

SimulationReport simulate(const Distribution& d, int n, const ContestSpec& c, std::uint64_t trials,
                          std::uint64_t seed, const TrialObserver& observer) {
    if (trials < 1) throw InvalidParameter("simulate: trials must be at least 1");
    const Game game = make_game(d, n, c);
    const std::uint64_t chunks = (trials + kChunk - 1) / kChunk;
    std::vector<Partial> partials(chunks);

    auto run_chunk = [&](std::uint64_t k, const TrialObserver* obs) {
        std::vector<double> skills(n), bids(n);
        std::uint64_t begin = k * kChunk;
        std::uint64_t end = std::min(trials, begin + kChunk);
        for (std::uint64_t t = begin; t < end; ++t) run_trial(d, game, seed, t, skills, bids, partials[k], obs);
    };

    unsigned workers = std::max(1u, std::thread::hardware_concurrency());
    if (observer || workers == 1 || chunks == 1) {
        for (std::uint64_t k = 0; k < chunks; ++k) run_chunk(k, &observer);
    } else {
        std::atomic<std::uint64_t> next{0};
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < std::min<std::uint64_t>(workers, chunks); ++w) {
            pool.emplace_back([&] {
                for (std::uint64_t k = next++; k < chunks; k = next++) run_chunk(k, nullptr);
            });
        }
        for (auto& th : pool) th.join();
    }

    // Ordered reduction keeps the result independent of the worker count.
    Partial total;
    for (const Partial& p : partials) {
        total.mp.merge(p.mp);
        total.rev.merge(p.rev);
        total.share += p.share;
        total.effort += p.effort;
    }
    SimulationReport r;
    r.trials = trials;
    r.seed = seed;
    r.mp_mean = total.mp.mean;
    r.mp_stderr = total.mp.stderr_of_mean();
    r.rev_mean = total.rev.mean;
    r.rev_stderr = total.rev.stderr_of_mean();
    r.mean_winner_share = total.share / static_cast<double>(trials);
    r.mean_effort = total.effort / static_cast<double>(trials);
    return r;
}

ConvergenceTable convergence_check(const Distribution& d, int n, const ContestSpec& c,
                                   const std::vector<std::uint64_t>& trial_ladder, std::uint64_t seed) {
    for (std::size_t i = 1; i < trial_ladder.size(); ++i) {
        if (trial_ladder[i] <= trial_ladder[i - 1]) throw InvalidParameter("convergence_check: ladder must increase");
    }
    ConvergenceTable table;
    table.quadrature_mp = expected_max_payment(d, n, c);
    table.consistent = true;
    double base = -1.0;
    for (std::uint64_t trials : trial_ladder) {
        SimulationReport rep = simulate(d, n, c, trials, seed);
        ConvergenceRow row;
        row.trials = trials;
        row.mp_mean = rep.mp_mean;
        row.mp_stderr = rep.mp_stderr;
        row.abs_error = std::abs(rep.mp_mean - table.quadrature_mp);
        // A tiny floor keeps degenerate (all-zero) contests consistent.
        row.within_3se = row.abs_error <= 3.0 * rep.mp_stderr + 1e-12;
        table.consistent = table.consistent && row.within_3se;
        double scaled = rep.mp_stderr * std::sqrt(static_cast<double>(trials));
        if (base < 0.0) {
            base = scaled;
        } else if (base > 0.0 && (scaled > 3.0 * base || scaled < base / 3.0)) {
            table.consistent = false;
        }
        table.rows.push_back(row);
    }
    return table;
}

} // namespace allpay
