#pragma once

#include <string>
#include <utility>
#include <vector>

#include "allpay/distribution.hpp"

namespace allpay {

enum class Comparison {
    Approx,     ///< |computed - reference| <= tolerance
    AtMost,     ///< computed <= reference + tolerance
    AtLeast,    ///< computed >= reference - tolerance
    Exceeds,    ///< computed > reference + tolerance
};

/// One reproduced numeric claim.
struct ReproLine {
    int criterion = 0;
    std::string claim_id;
    double reference_value = 0.0;
    double computed_value = 0.0;
    double tolerance = 0.0;
    Comparison comparison = Comparison::Approx;
    bool pass = false;
};

ReproLine make_line(int criterion, std::string claim_id, double reference_value, double computed_value,
                    double tolerance, Comparison comparison = Comparison::Approx);

std::string to_string(Comparison c);

/// Named distributions used for the cross-family checks: Uniform(0,1),
/// Exponential(1), Power(1.5), the 3/4 U[1,2] + 1/4 U[2,3] mixture and a
/// four-knot tabulated cdf.
std::vector<std::pair<std::string, DistributionSpec>> builtin_families();

/// The ten acceptance criteria. Deterministic: all randomness is seeded.
std::vector<ReproLine> criterion_lines(int criterion);
std::vector<ReproLine> reproduce_all();

inline constexpr int kCriterionCount = 10;

/// Short human-readable title of a criterion.
std::string criterion_title(int criterion);

} // namespace allpay
