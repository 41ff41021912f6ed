#pragma once

#include <optional>
#include <vector>

#include "allpay/distribution.hpp"

namespace allpay {

inline constexpr int kDefaultAnalyzeGrid = 4096;
inline constexpr double kMonotoneSlack = 1e-9;

/// Revenue virtual value v - (1 - F(v)) / f(v).
double revenue_virtual_value(const Distribution& d, double v);

/// Virtual value for the maximum-payment objective with n contestants:
/// v F(v)^(n-1) - (1 - F(v)^n) / (n f(v)). Collapses to the revenue
/// virtual value at n = 1.
double mp_virtual_value(const Distribution& d, int n, double v);

/// f(v) / (1 - F(v)).
double hazard_rate(const Distribution& d, double v);

/// Quantile-equispaced grid quantile(k / (size + 1)), k = 1..size.
std::vector<double> quantile_grid(const Distribution& d, int size);

/// Root of the revenue virtual value (the monopoly reserve). Throws
/// NoSignChange when the virtual value does not cross zero on the support.
double monopoly_reserve_value(const Distribution& d, int grid_size = kDefaultAnalyzeGrid);

/// Largest root of the maximum-payment virtual value, so that it is
/// nonnegative above the returned value. Throws NoSignChange when there is
/// no crossing.
double mp_reserve_value(const Distribution& d, int n, int grid_size = kDefaultAnalyzeGrid);

/// Sampled virtual-value curves and shape verdicts.
struct VirtualValueReport {
    int n = 0;
    std::vector<double> grid;
    std::vector<double> phi;
    std::vector<double> psi;
    std::vector<double> hazard;
    bool regular_for_revenue = false;
    bool n_regular_for_mp = false;
    bool mhr = false;
    std::optional<double> psi_nonneg_from;
};

VirtualValueReport analyze(const Distribution& d, int n, int grid_size = kDefaultAnalyzeGrid);

/// True when values are nondecreasing up to kMonotoneSlack.
bool nondecreasing(const std::vector<double>& values, double slack = kMonotoneSlack);

/// True when psi is nondecreasing on the grid points where it is nonnegative
/// and those points form an upper set of the grid (no nonnegative point
/// sits below a negative one). Under this condition the optimal contest is a
/// plain highest-bid-wins contest with a reserve.
bool regular_on_nonnegative_region(const VirtualValueReport& report);

} // namespace allpay
