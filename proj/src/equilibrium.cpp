#include "allpay/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "allpay/error.hpp"
#include "allpay/quadrature.hpp"

namespace allpay {

namespace {

double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    return std::round(std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)));
}

std::vector<double> merged_breakpoints(const Distribution& d, std::initializer_list<double> extra) {
    std::vector<double> out = d.breakpoints();
    out.insert(out.end(), extra.begin(), extra.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

void require_n(int n) {
    if (n < 1) throw InvalidParameter("contestant count n must be at least 1");
}

// Breakpoints of F mapped to quantile space.
std::vector<double> quantile_breakpoints(const Distribution& d) {
    std::vector<double> out;
    for (double b : d.breakpoints()) out.push_back(d.cdf(b));
    return out;
}

} // namespace

InterimAllocation highest_wins_allocation(const Distribution& d, int n, double reserve_value) {
    require_n(n);
    InterimAllocation a;
    a.n = n;
    a.lo = d.support_lo();
    a.hi = d.support_hi();
    a.x = [d, n, reserve_value](double v) {
        return v < reserve_value ? 0.0 : std::pow(d.cdf(v), n - 1);
    };
    a.breakpoints = merged_breakpoints(d, {reserve_value});
    return a;
}

InterimAllocation pooled_allocation(const Distribution& d, int n, double reserve_value,
                                    std::span<const Interval> pooling) {
    require_n(n);
    struct Pool {
        double lo, hi, share;
    };
    std::vector<Pool> pools;
    for (const Interval& iv : pooling) {
        if (!(iv.lo < iv.hi)) throw InvalidParameter("pooled_allocation: pooling interval needs lo < hi");
        double Fl = d.cdf(iv.lo);
        double Fu = d.cdf(iv.hi);
        if (!(Fu > Fl)) throw InvalidParameter("pooled_allocation: pooling interval carries no mass");
        double share = (std::pow(Fu, n) - std::pow(Fl, n)) / (n * (Fu - Fl));
        pools.push_back({iv.lo, iv.hi, share});
    }
    std::sort(pools.begin(), pools.end(), [](const Pool& x, const Pool& y) { return x.lo < y.lo; });
    for (std::size_t i = 1; i < pools.size(); ++i) {
        if (pools[i].lo < pools[i - 1].hi) throw InvalidParameter("pooled_allocation: pooling intervals overlap");
    }
    InterimAllocation a;
    a.n = n;
    a.lo = d.support_lo();
    a.hi = d.support_hi();
    a.x = [d, n, reserve_value, pools](double v) {
        if (v < reserve_value) return 0.0;
        for (const Pool& p : pools) {
            if (v >= p.lo && v <= p.hi) return p.share;
        }
        return std::pow(d.cdf(v), n - 1);
    };
    a.breakpoints = merged_breakpoints(d, {reserve_value});
    for (const Pool& p : pools) {
        a.breakpoints.push_back(p.lo);
        a.breakpoints.push_back(p.hi);
    }
    std::sort(a.breakpoints.begin(), a.breakpoints.end());
    return a;
}

void validate_prizes(int n, std::span<const double> prizes) {
    require_n(n);
    if (static_cast<int>(prizes.size()) != n) {
        throw InvalidParameter("prizes: expected " + std::to_string(n) + " entries, got " +
                               std::to_string(prizes.size()));
    }
    double total = 0.0;
    for (double a : prizes) {
        if (!std::isfinite(a) || a < 0.0) throw InvalidParameter("prizes: entries must be nonnegative");
        total += a;
    }
    if (std::abs(total - 1.0) > 1e-9) throw InvalidParameter("prizes: entries must sum to 1");
}

bool prizes_nonincreasing(std::span<const double> prizes) {
    for (std::size_t i = 1; i < prizes.size(); ++i) {
        if (prizes[i] > prizes[i - 1]) return false;
    }
    return true;
}

InterimAllocation static_prize_allocation(const Distribution& d, int n, std::span<const double> prizes) {
    validate_prizes(n, prizes);
    std::vector<double> a(prizes.begin(), prizes.end());
    std::vector<double> binom(n);
    for (int r = 1; r <= n; ++r) binom[r - 1] = binomial(n - 1, r - 1);
    InterimAllocation alloc;
    alloc.n = n;
    alloc.lo = d.support_lo();
    alloc.hi = d.support_hi();
    alloc.x = [d, n, a, binom](double v) {
        double F = d.cdf(v);
        double x = 0.0;
        for (int r = 1; r <= n; ++r) {
            if (a[r - 1] == 0.0) continue;
            x += binom[r - 1] * std::pow(1.0 - F, r - 1) * std::pow(F, n - r) * a[r - 1];
        }
        return x;
    };
    alloc.breakpoints = d.breakpoints();
    return alloc;
}

double allocation_integral(const InterimAllocation& a, double from, double to) {
    from = std::max(from, a.lo);
    if (!(to > from)) return 0.0;
    return integrate(a.x, from, to, kDefaultQuadTolerance, a.breakpoints);
}

double bid_from_allocation(const InterimAllocation& a, double v) {
    if (v < a.lo || v > a.hi || std::isnan(v)) {
        throw OutOfSupport("bid_from_allocation: value " + std::to_string(v) + " outside the support");
    }
    constexpr int kCells = 256;
    double prev = a(a.lo);
    for (int k = 1; k <= kCells; ++k) {
        double cur = a(a.lo + (v - a.lo) * k / kCells);
        if (cur < prev - 1e-9) {
            throw InvalidParameter("bid_from_allocation: allocation is not monotone non-decreasing");
        }
        prev = cur;
    }
    return v * a(v) - allocation_integral(a, a.lo, v);
}

double allpay_bid_highest_wins(const Distribution& d, int n, double reserve_value, double v) {
    require_n(n);
    if (v < reserve_value) return 0.0;
    double r = std::max(reserve_value, d.support_lo());
    if (n == 1) return r;
    double Fr = d.cdf(r);
    double Fv = d.cdf(v);
    double at_reserve = r * std::pow(Fr, n - 1);
    std::vector<double> qb = quantile_breakpoints(d);
    auto integrand = [&](double u) { return d.quantile(u) * (n - 1) * std::pow(u, n - 2); };
    if (Fv <= kTailQuantile) return at_reserve + integrate(integrand, Fr, Fv, kDefaultQuadTolerance, qb);
    // Deep in an unbounded tail F(v) rounds towards 1 and the quantile blows
    // up; finish the same Stieltjes integral in value space.
    double qs = std::max(Fr, kTailQuantile);
    double vs = std::max(r, d.quantile(qs));
    auto tail = [&](double t) { return t * (n - 1) * std::pow(d.cdf(t), n - 2) * d.pdf(t); };
    return at_reserve + integrate(integrand, Fr, qs, kDefaultQuadTolerance, qb) +
           integrate(tail, vs, v, kDefaultQuadTolerance, d.breakpoints());
}

double reserve_bid_from_value(const Distribution& d, int n, double r) {
    require_n(n);
    return r * std::pow(d.cdf(r), n - 1);
}

namespace detail {

double order_stat_expectation_quadrature(const Distribution& d, int j, int m, double z) {
    const double lo = d.support_lo();
    double Fz = d.cdf(z);
    if (!(Fz > 0.0)) return lo;
    int k = m - j + 1; // ascending rank
    double log_c = std::lgamma(m + 1.0) - std::lgamma(static_cast<double>(k)) - std::lgamma(m - k + 1.0);
    double c = std::exp(log_c);
    std::vector<double> ub;
    for (double b : d.breakpoints()) {
        if (b < z) ub.push_back(d.cdf(b) / Fz);
    }
    auto integrand = [&](double u) {
        return d.quantile(u * Fz) * c * std::pow(u, k - 1) * std::pow(1.0 - u, m - k);
    };
    return integrate(integrand, 0.0, 1.0, kDefaultQuadTolerance, ub);
}

} // namespace detail

double order_stat_expectation(const Distribution& d, int j, int m, double z) {
    if (m < 1 || j < 1 || j > m) {
        throw InvalidParameter("order_stat_expectation: rank j=" + std::to_string(j) +
                               " invalid for m=" + std::to_string(m));
    }
    const double lo = d.support_lo();
    if (!(z > lo)) return lo;
    if (z > d.support_hi()) z = d.support_hi();
    double Fz = d.cdf(z);
    if (j >= 3) return detail::order_stat_expectation_quadrature(d, j, m, z);

    const auto& bp = d.breakpoints();
    auto power_integral = [&](int p) {
        return integrate([&](double t) { return std::pow(d.cdf(t) / Fz, p); }, lo, z, kDefaultQuadTolerance, bp);
    };
    if (j == 1) return z - power_integral(m);
    return z - (m * power_integral(m - 1) - (m - 1) * power_integral(m));
}

double static_contest_bid(const Distribution& d, int n, std::span<const double> prizes, double v) {
    validate_prizes(n, prizes);
    const double lo = d.support_lo();
    auto prize = [&](int i) { return i <= n ? prizes[i - 1] : 0.0; };
    auto g = [&](int j, int m) { return j > m ? lo : order_stat_expectation(d, j, m, v); };
    double F = d.cdf(v);
    double bid = 0.0;
    for (int r = 1; r <= n; ++r) {
        double weight = binomial(n - 1, r - 1) * std::pow(1.0 - F, r - 1) * std::pow(F, n - r);
        if (weight == 0.0) continue;
        double inner = 0.0;
        for (int j = 1; j <= n + 1 - r; ++j) {
            double diff = prize(j + r - 1) - prize(j + r);
            if (diff == 0.0) continue;
            inner += g(j, n - r) * diff;
        }
        bid += weight * inner;
    }
    return bid;
}

BidFunction BidFunction::tabulate(const Distribution& d, const InterimAllocation& a, double reserve_value,
                                  int grid_size) {
    if (grid_size < 2) throw InvalidParameter("BidFunction: grid_size must be at least 2");
    BidFunction out;
    out.reserve_value_ = reserve_value;
    out.alloc_ = a;
    const double lo = d.support_lo();
    const double hi = d.effective_hi();
    out.tab_hi_ = hi;

    std::vector<double> cuts{lo};
    for (double b : a.breakpoints) {
        if (b > lo && b < hi) cuts.push_back(b);
    }
    cuts.push_back(hi);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    std::vector<double> global;
    global.reserve(grid_size);
    for (int k = 1; k <= grid_size; ++k) global.push_back(d.quantile(static_cast<double>(k) / (grid_size + 1)));

    double cumulative = 0.0; // integral of x from lo to the current point
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        Piece piece;
        piece.lo = cuts[i];
        piece.hi = cuts[i + 1];
        // Resynchronised per piece with the same call the contest designer
        // uses, so plateau levels equal its forbidden-interval ends exactly.
        cumulative = allocation_integral(a, a.lo, piece.lo);
        std::vector<double> pts{piece.lo};
        for (double g : global) {
            if (g > piece.lo && g < piece.hi) pts.push_back(g);
        }
        pts.push_back(piece.hi);

        // x is continuous inside the piece; the ends use one-sided limits.
        std::vector<double> xs(pts.size());
        for (std::size_t k = 0; k < pts.size(); ++k) {
            double at = pts[k];
            if (k == 0) at = std::nextafter(at, kInfinity);
            if (k + 1 == pts.size()) at = std::nextafter(at, -kInfinity);
            xs[k] = a(at);
        }
        bool constant = std::all_of(xs.begin(), xs.end(), [&](double x) { return x == xs.front(); });
        if (constant && !out.pieces_.empty() && out.pieces_.back().constant &&
            out.pieces_.back().x == xs.front() && out.pieces_.back().hi == piece.lo) {
            // A pooled stretch cut by a distribution breakpoint stays one plateau.
            out.pieces_.back().hi = piece.hi;
            continue;
        }
        if (constant) {
            piece.x = xs.front();
            piece.constant = true;
            piece.level = piece.lo * xs.front() - cumulative;
        } else {
            piece.v = pts;
            piece.b.resize(pts.size());
            for (std::size_t k = 0; k < pts.size(); ++k) {
                if (k > 0) cumulative += integrate(a.x, pts[k - 1], pts[k], 1e-13);
                piece.b[k] = pts[k] * xs[k] - cumulative;
            }
            // Rounding can leave adjacent samples out of order by an ulp.
            for (std::size_t k = 1; k < piece.b.size(); ++k) piece.b[k] = std::max(piece.b[k], piece.b[k - 1]);
        }
        out.pieces_.push_back(std::move(piece));
    }
    return out;
}

double BidFunction::operator()(double v) const {
    if (pieces_.empty()) return 0.0;
    if (v > tab_hi_) return bid_from_allocation(alloc_, std::min(v, alloc_.hi));
    auto it = std::upper_bound(pieces_.begin(), pieces_.end(), v,
                               [](double value, const Piece& p) { return value < p.lo; });
    const Piece& p = (it == pieces_.begin()) ? pieces_.front() : *std::prev(it);
    if (p.constant) return p.level;
    if (v <= p.v.front()) return p.b.front();
    if (v >= p.v.back()) return p.b.back();
    auto jt = std::upper_bound(p.v.begin(), p.v.end(), v);
    std::size_t k = static_cast<std::size_t>(jt - p.v.begin());
    double t = (v - p.v[k - 1]) / (p.v[k] - p.v[k - 1]);
    return p.b[k - 1] + t * (p.b[k] - p.b[k - 1]);
}

std::vector<double> BidFunction::grid() const {
    std::vector<double> out;
    for (const Piece& p : pieces_) {
        if (p.constant) {
            out.push_back(p.lo);
            out.push_back(p.hi);
        } else {
            out.insert(out.end(), p.v.begin(), p.v.end());
        }
    }
    return out;
}

std::vector<double> BidFunction::bids() const {
    std::vector<double> out;
    for (const Piece& p : pieces_) {
        if (p.constant) {
            out.push_back(p.level);
            out.push_back(p.level);
        } else {
            out.insert(out.end(), p.b.begin(), p.b.end());
        }
    }
    return out;
}

} // namespace allpay
