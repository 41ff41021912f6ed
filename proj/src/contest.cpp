#include "allpay/contest.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "allpay/error.hpp"
#include "allpay/quadrature.hpp"
#include "allpay/roots.hpp"
#include "allpay/virtual_values.hpp"

namespace allpay {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// Lower quantile for virtual-surplus integrals: psi may have an integrable
// singularity at the bottom of the support.
constexpr double kSurplusQuantileFloor = 1e-14;

const SymmetricHighestWins* as_highest_wins(const ContestSpec& c) {
    return std::get_if<SymmetricHighestWins>(&c);
}

void require_symmetric(const ContestSpec& c, int n) {
    if (std::holds_alternative<AsymmetricTwoAgent>(c)) {
        throw InvalidParameter("asymmetric contest: use evaluate_asymmetric");
    }
    if (contestants(c) != n) {
        throw InvalidParameter("contest is specified for n=" + std::to_string(contestants(c)) +
                               " but evaluated with n=" + std::to_string(n));
    }
}

double upper_quantile(const Distribution& d) {
    return d.bounded() ? 1.0 : kTailQuantile;
}

std::vector<double> to_quantiles(const Distribution& d, const std::vector<double>& values) {
    std::vector<double> out;
    for (double v : values) {
        if (v > d.support_lo() && v < d.support_hi()) out.push_back(d.cdf(v));
    }
    return out;
}

// Exact equilibrium bid (no tabulation) as a callable, used by the
// quadrature evaluators.
std::function<double(double)> exact_bid(const Distribution& d, const ContestSpec& c) {
    if (const auto* s = std::get_if<StaticPrizes>(&c)) {
        validate_prizes(s->n, s->prizes);
        return [d, s = *s](double v) { return static_contest_bid(d, s.n, s.prizes, v); };
    }
    InterimAllocation a = interim_allocation(d, c);
    // Validates monotonicity once over the whole support.
    (void)bid_from_allocation(a, d.effective_hi());
    return [a](double v) { return v * a(v) - allocation_integral(a, a.lo, v); };
}

std::vector<double> value_breakpoints(const Distribution& d, const ContestSpec& c) {
    std::vector<double> out = d.breakpoints();
    if (const auto* h = as_highest_wins(c)) {
        out.push_back(resolve_reserve_value(d, *h));
        for (const Interval& p : h->pooling) {
            out.push_back(p.lo);
            out.push_back(p.hi);
        }
    }
    return out;
}

} // namespace

int contestants(const ContestSpec& c) {
    return std::visit(Overloaded{
                          [](const SymmetricHighestWins& h) { return h.n; },
                          [](const StaticPrizes& s) { return s.n; },
                          [](const AsymmetricTwoAgent&) { return 2; },
                      },
                      c);
}

SymmetricHighestWins highest_bid_wins(const Distribution& d, int n, double reserve_value) {
    if (n < 1) throw InvalidParameter("contestant count n must be at least 1");
    SymmetricHighestWins c;
    c.n = n;
    double r = std::max(reserve_value, d.support_lo());
    c.reserve_value = r;
    c.reserve_bid = r > d.support_hi() ? r : reserve_bid_from_value(d, n, r);
    return c;
}

double resolve_reserve_value(const Distribution& d, const SymmetricHighestWins& c) {
    if (c.reserve_value) return std::max(*c.reserve_value, d.support_lo());
    if (!c.pooling.empty()) {
        throw InvalidParameter("contest with pooling intervals must state its reserve_value");
    }
    const double lo = d.support_lo();
    if (!(c.reserve_bid > reserve_bid_from_value(d, c.n, lo))) return lo;
    const double hi = d.effective_hi();
    if (c.reserve_bid > reserve_bid_from_value(d, c.n, hi)) return kInfinity;
    return bisect([&](double v) { return reserve_bid_from_value(d, c.n, v) - c.reserve_bid; }, lo, hi);
}

InterimAllocation interim_allocation(const Distribution& d, const ContestSpec& c) {
    return std::visit(
        Overloaded{
            [&](const SymmetricHighestWins& h) {
                double r = resolve_reserve_value(d, h);
                if (h.pooling.empty()) return highest_wins_allocation(d, h.n, r);
                return pooled_allocation(d, h.n, r, h.pooling);
            },
            [&](const StaticPrizes& s) { return static_prize_allocation(d, s.n, s.prizes); },
            [&](const AsymmetricTwoAgent&) -> InterimAllocation {
                throw InvalidParameter("asymmetric contest has per-agent allocations; use asymmetric_allocations");
            },
        },
        c);
}

BidFunction equilibrium_bids(const Distribution& d, const ContestSpec& c, int grid_size) {
    InterimAllocation a = interim_allocation(d, c);
    double r = d.support_lo();
    if (const auto* h = as_highest_wins(c)) r = resolve_reserve_value(d, *h);
    return BidFunction::tabulate(d, a, r, grid_size);
}

SymmetricHighestWins design_optimal_contest(const Distribution& d, int n) {
    VirtualValueReport report = analyze(d, n, kDefaultAnalyzeGrid);
    if (regular_on_nonnegative_region(report)) {
        if (!report.psi_nonneg_from) {
            throw NumericalFailure("design_optimal_contest: virtual value is negative everywhere; reward nobody");
        }
        double r;
        try {
            r = mp_reserve_value(d, n, kDefaultAnalyzeGrid);
        } catch (const NoSignChange&) {
            r = d.support_lo(); // nonnegative across the whole support
        }
        return highest_bid_wins(d, n, r);
    }

    IronedCurve ic = iron(d, n, kDefaultIroningGrid);
    auto ironed = [&](double v) { return ironed_mp_virtual_value(ic, d, n, v); };

    std::vector<double> scan;
    scan.push_back(d.quantile(kQuantileClip));
    for (double v : quantile_grid(d, kDefaultAnalyzeGrid)) scan.push_back(v);
    scan.push_back(d.quantile(1.0 - kQuantileClip));
    std::size_t first = scan.size();
    for (std::size_t i = 0; i < scan.size(); ++i) {
        if (ironed(scan[i]) >= 0.0) {
            first = i;
            break;
        }
    }
    if (first == scan.size()) {
        throw NumericalFailure("design_optimal_contest: ironed virtual value is negative everywhere; reward nobody");
    }
    double r = first == 0 ? d.support_lo() : bisect(ironed, scan[first - 1], scan[first]);

    SymmetricHighestWins c;
    c.n = n;
    c.reserve_value = r;
    for (std::size_t k = 0; k < ic.ironed_intervals.size(); ++k) {
        if (ic.ironed_levels[k] >= 0.0 && ic.ironed_intervals[k].hi > r) {
            Interval p = ic.ironed_intervals[k];
            p.lo = std::max(p.lo, r);
            c.pooling.push_back(p);
        }
    }
    InterimAllocation a = pooled_allocation(d, n, r, c.pooling);
    auto I = [&](double v) { return allocation_integral(a, a.lo, v); };
    c.reserve_bid = r * a(r);

    const double top = d.effective_hi();
    for (const Interval& p : c.pooling) {
        double Il = I(p.lo);
        double plateau = p.lo * a(std::nextafter(p.lo, kInfinity)) - Il;
        if (p.lo > r) {
            double below = p.lo * a(std::nextafter(p.lo, -kInfinity)) - Il;
            c.forbidden.push_back({below, plateau, true, false, below});
        }
        if (p.hi < top) {
            double above = p.hi * a(std::nextafter(p.hi, kInfinity)) - I(p.hi);
            c.forbidden.push_back({plateau, above, false, true, plateau});
        }
    }
    return c;
}

double expected_max_payment(const Distribution& d, int n, const ContestSpec& c) {
    require_symmetric(c, n);
    if (const auto* h = as_highest_wins(c)) {
        if (!(resolve_reserve_value(d, *h) < d.support_hi())) return 0.0;
    }
    auto bid = exact_bid(d, c);
    auto integrand = [&](double q) { return bid(d.quantile(q)) * std::pow(q, n - 1); };
    std::vector<double> qb = to_quantiles(d, value_breakpoints(d, c));
    return n * integrate(integrand, 0.0, upper_quantile(d), 1e-9, qb);
}

double expected_revenue(const Distribution& d, int n, const ContestSpec& c) {
    require_symmetric(c, n);
    if (const auto* h = as_highest_wins(c)) {
        if (!(resolve_reserve_value(d, *h) < d.support_hi())) return 0.0;
    }
    auto bid = exact_bid(d, c);
    auto integrand = [&](double q) { return bid(d.quantile(q)); };
    std::vector<double> qb = to_quantiles(d, value_breakpoints(d, c));
    return n * integrate(integrand, 0.0, upper_quantile(d), 1e-9, qb);
}

double expected_max_payment_via_virtual_surplus(const Distribution& d, int n, const ContestSpec& c) {
    require_symmetric(c, n);
    InterimAllocation a = interim_allocation(d, c);
    auto integrand = [&](double q) {
        double v = d.quantile(q);
        double x = a(v);
        if (x == 0.0 || !d.inside(v)) return 0.0;
        return x * mp_virtual_value(d, n, v);
    };
    std::vector<double> qb = to_quantiles(d, value_breakpoints(d, c));
    return n * integrate(integrand, kSurplusQuantileFloor, upper_quantile(d), 1e-9, qb);
}

double optimal_revenue_benchmark(const Distribution& d, int n) {
    VirtualValueReport report = analyze(d, n, kDefaultAnalyzeGrid);
    if (!report.regular_for_revenue) {
        throw InvalidParameter("optimal_revenue_benchmark: distribution is not regular for revenue; "
                               "supply a custom benchmark");
    }
    double r = monopoly_reserve_value(d, kDefaultAnalyzeGrid);
    auto integrand = [&](double q) {
        double v = d.quantile(q);
        if (!d.inside(v)) return 0.0;
        return revenue_virtual_value(d, v) * std::pow(q, n - 1);
    };
    std::vector<double> qb = to_quantiles(d, d.breakpoints());
    return n * integrate(integrand, d.cdf(r), upper_quantile(d), 1e-9, qb);
}

EvaluationReport ratios(const Distribution& d, int n, const ContestSpec& c) {
    if (const auto* asym = std::get_if<AsymmetricTwoAgent>(&c)) {
        if (n != 2) throw InvalidParameter("asymmetric contest has exactly two contestants");
        return evaluate_asymmetric(d, *asym).eval;
    }
    EvaluationReport r;
    r.mp_exact = expected_max_payment(d, n, c);
    r.rev_exact = expected_revenue(d, n, c);
    r.mp_virtual_surplus = expected_max_payment_via_virtual_surplus(d, n, c);
    if (!(r.mp_exact > 0.0)) {
        throw NumericalFailure("ratios: expected maximum payment is zero; ratios are undefined");
    }
    r.utilization_ratio = r.rev_exact / r.mp_exact;
    try {
        r.opt_revenue = optimal_revenue_benchmark(d, n);
        r.approximation_ratio = *r.opt_revenue / r.mp_exact;
    } catch (const InvalidParameter&) {
        // irregular for revenue: no internal benchmark
    } catch (const NoSignChange&) {
    }
    return r;
}

StaticComparison compare_static(const Distribution& d, int n, const std::vector<std::vector<double>>& prize_vectors) {
    StaticComparison out;
    std::vector<double> wta(n, 0.0);
    wta[0] = 1.0;
    out.winner_take_all_mp = expected_max_payment(d, n, StaticPrizes{n, wta});
    out.winner_take_all_is_max = true;
    for (const auto& prizes : prize_vectors) {
        StaticPrizes spec{n, prizes};
        StaticComparisonRow row;
        row.prizes = prizes;
        row.mp = expected_max_payment(d, n, spec);
        row.revenue = expected_revenue(d, n, spec);
        if (row.mp > out.winner_take_all_mp + 1e-6) out.winner_take_all_is_max = false;
        out.rows.push_back(std::move(row));
    }
    return out;
}

} // namespace allpay
