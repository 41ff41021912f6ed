#include "allpay/repro.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "allpay/contest.hpp"
#include "allpay/equilibrium.hpp"
#include "allpay/ironing.hpp"
#include "allpay/simulation.hpp"
#include "allpay/virtual_values.hpp"

namespace allpay {

namespace {

constexpr std::uint64_t kSeed = 20260101;
constexpr std::uint64_t kMonteCarloTrials = 1'000'000;

MixtureSpec mixture_example() {
    return MixtureSpec{{{1.0, 2.0, 0.75}, {2.0, 3.0, 0.25}}};
}

std::vector<ReproLine> uniform_optimal() {
    std::vector<ReproLine> out;
    Distribution d(UniformSpec{0.0, 1.0});
    for (int n : {2, 3, 5, 10}) {
        std::string tag = "n=" + std::to_string(n);
        SymmetricHighestWins c = design_optimal_contest(d, n);
        out.push_back(make_line(1, "uniform.reserve_value." + tag, std::pow(n + 1.0, -1.0 / n),
                                resolve_reserve_value(d, c), 1e-6));
        out.push_back(make_line(1, "uniform.reserve_bid." + tag, 1.0 / (n + 1), c.reserve_bid, 1e-9));
        out.push_back(make_line(1, "uniform.opt_mp_quadrature." + tag, n / (2.0 * (n + 1)),
                                expected_max_payment(d, n, c), 1e-6));
        SimulationReport sim = simulate(d, n, c, kMonteCarloTrials, kSeed + n);
        out.push_back(make_line(1, "uniform.opt_mp_monte_carlo." + tag, n / (2.0 * (n + 1)), sim.mp_mean,
                                3.0 * sim.mp_stderr));
    }
    return out;
}

std::vector<ReproLine> uniform_no_reserve() {
    std::vector<ReproLine> out;
    Distribution d(UniformSpec{0.0, 1.0});
    for (int n : {2, 3, 5, 10}) {
        std::string tag = "n=" + std::to_string(n);
        SymmetricHighestWins c = highest_bid_wins(d, n, 0.0);
        InterimAllocation a = interim_allocation(d, c);
        double worst = 0.0;
        for (int k = 0; k < 100; ++k) {
            double v = (k + 0.5) / 100.0;
            double expected = (n - 1.0) / n * std::pow(v, n);
            worst = std::max(worst, std::abs(bid_from_allocation(a, v) - expected));
        }
        out.push_back(make_line(2, "uniform.no_reserve_bid_max_abs_error." + tag, 0.0, worst, 1e-9));
        EvaluationReport r = ratios(d, n, c);
        out.push_back(make_line(2, "uniform.no_reserve_revenue." + tag, (n - 1.0) / (n + 1.0), r.rev_exact, 1e-6));
        out.push_back(make_line(2, "uniform.no_reserve_mp." + tag, (n - 1.0) / (2.0 * n), r.mp_exact, 1e-6));
        out.push_back(make_line(2, "uniform.utilization." + tag, 2.0 * n / (n + 1.0), r.utilization_ratio, 1e-6));
        out.push_back(make_line(2, "uniform.utilization_bound." + tag, 2.0, r.utilization_ratio, 0.0, Comparison::AtMost));
    }
    return out;
}

std::vector<ReproLine> exponential_example() {
    std::vector<ReproLine> out;
    Distribution d(ExponentialSpec{1.0});
    double worst = 0.0;
    for (int k = 1; k <= 100; ++k) {
        double z = 0.1 * k;
        double closed = (z - 1.0) + std::exp(-z) * (0.5 - z);
        worst = std::max(worst, std::abs(mp_virtual_value(d, 2, z) - closed));
    }
    out.push_back(make_line(3, "exponential.psi2_closed_form_max_abs_error", 0.0, worst, 1e-12));
    double r = mp_reserve_value(d, 2);
    out.push_back(make_line(3, "exponential.mp_reserve_value", 1.21, r, 0.005));
    SymmetricHighestWins c = design_optimal_contest(d, 2);
    out.push_back(make_line(3, "exponential.reserve_bid", 0.85, c.reserve_bid, 0.005));

    VirtualValueReport rep = analyze(d, 2);
    std::vector<double> above;
    bool dips_below = false;
    for (std::size_t i = 0; i < rep.grid.size(); ++i) {
        if (rep.grid[i] >= 0.24) above.push_back(rep.psi[i]);
        if (i > 0 && rep.grid[i] < 0.235 && rep.psi[i] < rep.psi[i - 1]) dips_below = true;
    }
    out.push_back(make_line(3, "exponential.psi2_nondecreasing_above_0.24", 1.0, nondecreasing(above) ? 1.0 : 0.0, 0.0));
    out.push_back(make_line(3, "exponential.psi2_decreasing_below_0.24", 1.0, dips_below ? 1.0 : 0.0, 0.0));
    out.push_back(make_line(3, "exponential.not_n_regular", 0.0, rep.n_regular_for_mp ? 1.0 : 0.0, 0.0));
    out.push_back(make_line(3, "exponential.forbidden_interval_count", 0.0,
                            static_cast<double>(c.forbidden.size()), 0.0));
    return out;
}

std::vector<ReproLine> mixture_example_lines() {
    std::vector<ReproLine> out;
    Distribution d(mixture_example());
    IronedCurve ic = iron(d, 2);
    out.push_back(make_line(4, "mixture.ironed_interval_count", 1.0, static_cast<double>(ic.ironed_intervals.size()), 0.0));
    if (!ic.ironed_intervals.empty()) {
        out.push_back(make_line(4, "mixture.ironed_lo", 1.918, ic.ironed_intervals[0].lo, 0.01));
        out.push_back(make_line(4, "mixture.ironed_hi", 2.167, ic.ironed_intervals[0].hi, 0.01));
    }
    SymmetricHighestWins c = design_optimal_contest(d, 2);
    out.push_back(make_line(4, "mixture.forbidden_interval_count", 2.0, static_cast<double>(c.forbidden.size()), 0.0));
    if (c.forbidden.size() == 2) {
        out.push_back(make_line(4, "mixture.forbidden_lower_start", 1.10, c.forbidden[0].lo, 0.01));
        out.push_back(make_line(4, "mixture.allowed_plateau_bid", 1.199, c.forbidden[0].hi, 0.005));
        out.push_back(make_line(4, "mixture.allowed_plateau_bid_snap", 1.199, c.forbidden[1].allowed_bid, 0.005));
        out.push_back(make_line(4, "mixture.forbidden_upper_end", 1.31, c.forbidden[1].hi, 0.01));
    }
    const auto& curve = ic.curve;
    double lo = kInfinity;
    double hi = -kInfinity;
    for (std::size_t i = 0; i < curve.q.size(); ++i) {
        double q = curve.q[i];
        double s = curve.R[i] + 0.5 * d.quantile(q) * (1.0 - q * q);
        lo = std::min(lo, s);
        hi = std::max(hi, s);
    }
    out.push_back(make_line(4, "mixture.orientation_constant_spread", 0.0, hi - lo, 1e-4));
    return out;
}

std::vector<ReproLine> asymmetric_example() {
    std::vector<ReproLine> out;
    AsymmetricReport r = evaluate_asymmetric_example();
    out.push_back(make_line(5, "asymmetric.symmetric_mp", 0.396, r.symmetric_mp, 0.002));
    out.push_back(make_line(5, "asymmetric.asymmetric_mp", 0.397, r.eval.mp_exact, 0.002));
    out.push_back(make_line(5, "asymmetric.asymmetric_at_least_symmetric", r.symmetric_mp, r.eval.mp_exact, 0.0,
                            Comparison::AtLeast));
    out.push_back(make_line(5, "asymmetric.round_down_bid", 0.418, r.favored_low_bid, 0.005));
    out.push_back(make_line(5, "asymmetric.guarantee_bid", 0.681, r.favored_high_bid, 0.005));
    out.push_back(make_line(5, "asymmetric.reserve_value", 0.63, r.reserve_value, 0.005));
    out.push_back(make_line(5, "asymmetric.reserve_bid", 0.315, r.reserve_bid, 0.005));
    return out;
}

DistributionSpec random_family(std::mt19937_64& gen, std::string& name) {
    std::uniform_int_distribution<int> pick(0, 4);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    switch (pick(gen)) {
    case 0: {
        double a = 2.0 * u01(gen);
        double w = 0.2 + 2.0 * u01(gen);
        name = "uniform";
        return UniformSpec{a, a + w};
    }
    case 1:
        name = "exponential";
        return ExponentialSpec{0.25 + 3.0 * u01(gen)};
    case 2:
        name = "power";
        return PowerSpec{0.3 + 3.0 * u01(gen)};
    case 3:
        name = "mixture";
        return mixture_example();
    default:
        name = "tabulated";
        return builtin_families().back().second;
    }
}

std::vector<ReproLine> utilization_property() {
    std::mt19937_64 gen(kSeed);
    std::uniform_int_distribution<int> pick_n(2, 10);
    std::uniform_real_distribution<double> pick_q(0.0, 0.95);
    double worst = 0.0;
    std::string worst_id;
    for (int trial = 0; trial < 50; ++trial) {
        std::string name;
        Distribution d(random_family(gen, name));
        int n = pick_n(gen);
        double r = d.quantile(pick_q(gen));
        EvaluationReport rep = ratios(d, n, highest_bid_wins(d, n, r));
        if (rep.utilization_ratio > worst) {
            worst = rep.utilization_ratio;
            worst_id = name + ".n=" + std::to_string(n);
        }
    }
    return {make_line(6, "utilization.max_over_50_contests(" + worst_id + ")", 2.0, worst, 1e-6, Comparison::AtMost)};
}

std::vector<ReproLine> virtual_surplus_equivalence() {
    std::vector<ReproLine> out;
    for (const auto& [name, spec] : builtin_families()) {
        Distribution d(spec);
        for (int n : {2, 5}) {
            for (int which = 0; which < 2; ++which) {
                ContestSpec c = which == 0 ? ContestSpec(design_optimal_contest(d, n))
                                           : ContestSpec(highest_bid_wins(d, n, d.support_lo()));
                double direct = expected_max_payment(d, n, c);
                double surplus = expected_max_payment_via_virtual_surplus(d, n, c);
                double rel = std::abs(direct - surplus) / std::max(1.0, std::abs(direct));
                out.push_back(make_line(7,
                                        name + (which == 0 ? ".optimal" : ".no_reserve") + ".n=" + std::to_string(n) +
                                            ".relative_gap",
                                        0.0, rel, 1e-4));
            }
        }
    }
    return out;
}

std::vector<ReproLine> static_dominance() {
    std::vector<ReproLine> out;
    Distribution uniform(UniformSpec{0.0, 1.0});
    {
        StaticComparison cmp = compare_static(uniform, 3, {{2.0 / 3.0, 1.0 / 3.0, 0.0}});
        out.push_back(make_line(8, "static.uniform.n=3.wta_minus_two_thirds_split", 0.0,
                                cmp.winner_take_all_mp - cmp.rows[0].mp, 1e-6, Comparison::Exceeds));
    }
    std::mt19937_64 gen(kSeed + 8);
    std::exponential_distribution<double> gamma1(1.0);
    for (const auto& [name, spec] : {std::pair<std::string, DistributionSpec>{"uniform", UniformSpec{0.0, 1.0}},
                                     std::pair<std::string, DistributionSpec>{"power1.5", PowerSpec{1.5}}}) {
        Distribution d(spec);
        for (int n : {2, 3, 4}) {
            std::vector<std::vector<double>> vectors;
            for (int k = 0; k < 20; ++k) {
                std::vector<double> a(n);
                double total = 0.0;
                for (double& x : a) total += (x = gamma1(gen));
                for (double& x : a) x /= total;
                std::sort(a.begin(), a.end(), std::greater<>());
                double sum = 0.0;
                for (int i = 1; i < n; ++i) sum += a[i];
                a[0] = 1.0 - sum;
                vectors.push_back(a);
            }
            StaticComparison cmp = compare_static(d, n, vectors);
            double margin = kInfinity;
            for (const auto& row : cmp.rows) margin = std::min(margin, cmp.winner_take_all_mp - row.mp);
            out.push_back(make_line(8, "static." + name + ".n=" + std::to_string(n) + ".min_margin_over_20_vectors",
                                    0.0, margin, 1e-6, Comparison::Exceeds));
        }
    }
    return out;
}

std::vector<ReproLine> prior_independent_bound() {
    std::vector<ReproLine> out;
    std::vector<std::pair<std::string, DistributionSpec>> fams = {
        {"uniform", UniformSpec{0.0, 1.0}}, {"exponential", ExponentialSpec{1.0}}, {"power1.5", PowerSpec{1.5}}};
    for (const auto& [name, spec] : fams) {
        Distribution d(spec);
        double worst = -kInfinity;
        for (int n = 2; n <= 10; ++n) {
            double mp = expected_max_payment(d, n, highest_bid_wins(d, n, d.support_lo()));
            double ratio = optimal_revenue_benchmark(d, n) / mp;
            worst = std::max(worst, ratio - 2.0 * n / (n - 1.0));
        }
        out.push_back(make_line(9, name + ".max_over_n(ratio-2n/(n-1))", 0.0, worst, 1e-6, Comparison::AtMost));
    }
    Distribution u(UniformSpec{0.0, 1.0});
    double ratio = optimal_revenue_benchmark(u, 2) / expected_max_payment(u, 2, highest_bid_wins(u, 2, 0.0));
    out.push_back(make_line(9, "uniform.n=2.approximation_ratio", 5.0 / 3.0, ratio, 1e-6));
    return out;
}

std::vector<ReproLine> revenue_equivalence() {
    std::vector<ReproLine> out;
    for (const auto& [name, spec] : builtin_families()) {
        Distribution d(spec);
        double worst = 0.0;
        for (int n : {2, 5}) {
            for (double reserve_q : {0.0, 0.4}) {
                double r = d.quantile(reserve_q);
                InterimAllocation a = highest_wins_allocation(d, n, r);
                for (int k = 0; k < 100; ++k) {
                    double v = d.quantile((k + 0.5) / 100.0);
                    worst = std::max(worst, std::abs(bid_from_allocation(a, v) - allpay_bid_highest_wins(d, n, r, v)));
                }
            }
        }
        out.push_back(make_line(10, name + ".max_abs_bid_gap", 0.0, worst, 1e-8));
    }
    return out;
}

} // namespace

ReproLine make_line(int criterion, std::string claim_id, double reference_value, double computed_value, double tolerance,
                    Comparison comparison) {
    ReproLine line{criterion, std::move(claim_id), reference_value, computed_value, tolerance, comparison, false};
    switch (comparison) {
    case Comparison::Approx:
        line.pass = std::abs(computed_value - reference_value) <= tolerance;
        break;
    case Comparison::AtMost:
        line.pass = computed_value <= reference_value + tolerance;
        break;
    case Comparison::AtLeast:
        line.pass = computed_value >= reference_value - tolerance;
        break;
    case Comparison::Exceeds:
        line.pass = computed_value > reference_value + tolerance;
        break;
    }
    return line;
}

std::string to_string(Comparison c) {
    switch (c) {
    case Comparison::Approx: return "approx";
    case Comparison::AtMost: return "at_most";
    case Comparison::AtLeast: return "at_least";
    case Comparison::Exceeds: return "exceeds";
    }
    return "?";
}

std::vector<std::pair<std::string, DistributionSpec>> builtin_families() {
    return {
        {"uniform", UniformSpec{0.0, 1.0}},
        {"exponential", ExponentialSpec{1.0}},
        {"power1.5", PowerSpec{1.5}},
        {"mixture", mixture_example()},
        {"tabulated", TabulatedSpec{{{{0.0, 0.0}}, {{0.3, 0.2}}, {{0.7, 0.6}}, {{1.0, 1.0}}}}},
    };
}

std::string criterion_title(int criterion) {
    switch (criterion) {
    case 1: return "uniform optimal contest";
    case 2: return "uniform no-reserve contest";
    case 3: return "exponential example";
    case 4: return "irregular mixture ironing";
    case 5: return "asymmetric two-agent example";
    case 6: return "utilization ratio at most 2";
    case 7: return "direct vs virtual-surplus maximum payment";
    case 8: return "winner-take-all dominates static prizes";
    case 9: return "prior-independent 2n/(n-1) bound";
    case 10: return "revenue equivalence of bid derivations";
    }
    return "unknown";
}

std::vector<ReproLine> criterion_lines(int criterion) {
    switch (criterion) {
    case 1: return uniform_optimal();
    case 2: return uniform_no_reserve();
    case 3: return exponential_example();
    case 4: return mixture_example_lines();
    case 5: return asymmetric_example();
    case 6: return utilization_property();
    case 7: return virtual_surplus_equivalence();
    case 8: return static_dominance();
    case 9: return prior_independent_bound();
    case 10: return revenue_equivalence();
    }
    return {};
}

std::vector<ReproLine> reproduce_all() {
    std::vector<ReproLine> all;
    for (int c = 1; c <= kCriterionCount; ++c) {
        auto lines = criterion_lines(c);
        all.insert(all.end(), lines.begin(), lines.end());
    }
    return all;
}

} // namespace allpay
