#pragma once

#include <cmath>

#include "allpay/error.hpp"

namespace allpay {

/// Bisection on a bracket [lo, hi] with f(lo) and f(hi) of opposite sign (or
/// one of them zero). Runs until the bracket collapses to adjacent doubles,
/// which for continuous f leaves |f(root)| at rounding level; for a jump
/// across zero it returns the jump location.
template <typename F>
double bisect(F&& f, double lo, double hi) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo < 0.0) == (fhi < 0.0)) {
        throw NoSignChange("bisect: endpoints do not bracket a root");
    }
    for (int iter = 0; iter < 2000; ++iter) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        double fmid = f(mid);
        if (fmid == 0.0) return mid;
        if ((fmid < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    // Prefer the endpoint with the smaller residual.
    return std::abs(flo) <= std::abs(f(hi)) ? lo : hi;
}

} // namespace allpay
