#pragma once

#include <array>
#include <limits>
#include <string>
#include <variant>
#include <vector>

#include "allpay/rng.hpp"

namespace allpay {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Quantile at which unbounded supports are truncated for quadrature and
/// envelope construction.
inline constexpr double kTailQuantile = 1.0 - 1e-10;

struct UniformSpec {
    double a = 0.0;
    double b = 1.0;
};

struct ExponentialSpec {
    double rate = 1.0;
};

/// cdf x^alpha on [0, 1].
struct PowerSpec {
    double alpha = 1.0;
};

struct MixtureSegment {
    double lo = 0.0;
    double hi = 1.0;
    double weight = 1.0;
};

/// Piecewise-uniform mixture; segments must tile a single interval.
struct MixtureSpec {
    std::vector<MixtureSegment> segments;
};

/// Sorted (value, cdf) knots, linearly interpolated.
struct TabulatedSpec {
    std::vector<std::array<double, 2>> points;
};

using DistributionSpec =
    std::variant<UniformSpec, ExponentialSpec, PowerSpec, MixtureSpec, TabulatedSpec>;

std::string kind_name(const DistributionSpec& spec);

/// Continuous value distribution on an interval support. Immutable after
/// construction; cheap to copy.
class Distribution {
public:
    /// Validates the parameters and throws InvalidParameter naming the violated
    /// constraint.
    explicit Distribution(DistributionSpec spec);

    const DistributionSpec& spec() const { return spec_; }

    double support_lo() const { return lo_; }
    double support_hi() const { return hi_; }
    bool bounded() const { return hi_ < kInfinity; }

    /// Upper end used by quadrature: support_hi, or the kTailQuantile point
    /// when the support is unbounded.
    double effective_hi() const;

    /// True when lo < v < hi.
    bool inside(double v) const { return v > lo_ && v < hi_; }

    double cdf(double v) const;
    /// 1 - cdf(v), computed without cancellation where the family allows it.
    double survival(double v) const;
    double pdf(double v) const;
    double quantile(double q) const;

    /// Interior points where the density is discontinuous (mixture
    /// boundaries, tabulated knots).
    const std::vector<double>& breakpoints() const { return breakpoints_; }

    template <typename URBG>
    double sample(URBG& gen) const {
        return quantile(uniform_open01(gen));
    }

private:
    DistributionSpec spec_;
    double lo_ = 0.0;
    double hi_ = 1.0;
    std::vector<double> breakpoints_;
    // Mixture: cumulative mass at each segment start, and segment densities.
    std::vector<double> cum_;
    std::vector<double> dens_;
};

/// Validates and constructs.
Distribution build(const DistributionSpec& spec);

} // namespace allpay
