#include "allpay/virtual_values.hpp"

#include <cmath>
#include <string>

#include "allpay/error.hpp"
#include "allpay/roots.hpp"

namespace allpay {

namespace {

void require_inside(const Distribution& d, double v, const char* what) {
    if (!d.inside(v)) {
        throw OutOfSupport(std::string(what) + ": value " + std::to_string(v) +
                           " is outside the open support");
    }
}

void require_n(int n) {
    if (n < 1) throw InvalidParameter("contestant count n must be at least 1");
}

// Grid for root scans: the analyze grid plus the clipped support ends.
std::vector<double> scan_grid(const Distribution& d, int size) {
    std::vector<double> grid;
    grid.reserve(size + 2);
    grid.push_back(d.quantile(1e-10));
    for (double v : quantile_grid(d, size)) grid.push_back(v);
    grid.push_back(d.quantile(kTailQuantile));
    return grid;
}

// Largest bracketing cell where g goes from negative to nonnegative.
template <typename G>
double largest_upcrossing(const Distribution& d, int grid_size, G&& g, const char* what) {
    std::vector<double> grid = scan_grid(d, grid_size);
    std::vector<double> values(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) values[i] = g(grid[i]);
    for (std::size_t i = grid.size() - 1; i > 0; --i) {
        if (values[i] >= 0.0 && values[i - 1] < 0.0) {
            return bisect(g, grid[i - 1], grid[i]);
        }
    }
    throw NoSignChange(std::string(what) + ": no sign change on the support");
}

} // namespace

double revenue_virtual_value(const Distribution& d, double v) {
    require_inside(d, v, "revenue_virtual_value");
    return v - d.survival(v) / d.pdf(v);
}

double mp_virtual_value(const Distribution& d, int n, double v) {
    require_n(n);
    require_inside(d, v, "mp_virtual_value");
    double F = d.cdf(v);
    if (n == 1) return v - d.survival(v) / d.pdf(v);
    // 1 - F^n = (1 - F)(1 + F + ... + F^(n-1)) keeps precision near F = 1.
    double geometric = 0.0;
    double power = 1.0;
    for (int j = 0; j < n; ++j) {
        geometric += power;
        power *= F;
    }
    double tail = d.survival(v) * geometric;
    return v * std::pow(F, n - 1) - tail / (n * d.pdf(v));
}

double hazard_rate(const Distribution& d, double v) {
    require_inside(d, v, "hazard_rate");
    double s = d.survival(v);
    if (!(s > 0.0)) throw OutOfSupport("hazard_rate: cdf(v) = 1");
    return d.pdf(v) / s;
}

std::vector<double> quantile_grid(const Distribution& d, int size) {
    if (size < 1) throw InvalidParameter("grid size must be positive");
    std::vector<double> grid(size);
    for (int k = 1; k <= size; ++k) grid[k - 1] = d.quantile(static_cast<double>(k) / (size + 1));
    return grid;
}

double monopoly_reserve_value(const Distribution& d, int grid_size) {
    return largest_upcrossing(
        d, grid_size, [&](double v) { return revenue_virtual_value(d, v); },
        "monopoly_reserve_value");
}

double mp_reserve_value(const Distribution& d, int n, int grid_size) {
    require_n(n);
    return largest_upcrossing(
        d, grid_size, [&](double v) { return mp_virtual_value(d, n, v); }, "mp_reserve_value");
}

bool nondecreasing(const std::vector<double>& values, double slack) {
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (values[i] < values[i - 1] - slack) return false;
    }
    return true;
}

VirtualValueReport analyze(const Distribution& d, int n, int grid_size) {
    require_n(n);
    if (grid_size < 64) throw InvalidParameter("analyze: grid_size must be at least 64");
    VirtualValueReport r;
    r.n = n;
    r.grid = quantile_grid(d, grid_size);
    r.phi.reserve(grid_size);
    r.psi.reserve(grid_size);
    r.hazard.reserve(grid_size);
    for (double v : r.grid) {
        r.phi.push_back(revenue_virtual_value(d, v));
        r.psi.push_back(mp_virtual_value(d, n, v));
        r.hazard.push_back(hazard_rate(d, v));
    }
    r.regular_for_revenue = nondecreasing(r.phi);
    r.n_regular_for_mp = nondecreasing(r.psi);
    r.mhr = nondecreasing(r.hazard);
    for (std::size_t i = 0; i < r.grid.size(); ++i) {
        if (r.psi[i] >= 0.0) {
            r.psi_nonneg_from = r.grid[i];
            break;
        }
    }
    return r;
}

bool regular_on_nonnegative_region(const VirtualValueReport& report) {
    bool seen_nonneg = false;
    double last = 0.0;
    for (double p : report.psi) {
        if (p >= 0.0) {
            if (seen_nonneg && p < last - kMonotoneSlack) return false;
            seen_nonneg = true;
            last = p;
        } else if (seen_nonneg) {
            return false;
        }
    }
    return true;
}

} // namespace allpay
