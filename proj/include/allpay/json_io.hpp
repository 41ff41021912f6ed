#pragma once

#include <iosfwd>
#include <string>

#include "json.hpp"

#include "allpay/contest.hpp"
#include "allpay/distribution.hpp"
#include "allpay/ironing.hpp"
#include "allpay/simulation.hpp"
#include "allpay/virtual_values.hpp"

namespace allpay {

using Json = nlohmann::json;

// Distribution specs: {"kind": ..., "params": {...}}.
Json to_json(const DistributionSpec& spec);
DistributionSpec distribution_spec_from_json(const Json& j);

// Contest specs: {"kind": "symmetric_highest_wins" | "static_prizes" |
// "asymmetric_two_agent", "params": {...}}.
Json to_json(const ContestSpec& spec);
ContestSpec contest_spec_from_json(const Json& j);

Json to_json(const EvaluationReport& r);
Json to_json(const VirtualValueReport& r);
Json to_json(const SimulationReport& r);
Json to_json(const AsymmetricReport& r);
Json to_json(const StaticComparison& r);
Json to_json(const ConvergenceTable& t);

/// Parses a JSON document; throws InvalidParameter on malformed input.
Json parse_json(const std::string& text);

/// Reads a file, or treats the argument itself as JSON when it starts with
/// '{'.
Json load_json_argument(const std::string& path_or_json);

// CSV writers. Each writes a header row followed by one row per sample.
void write_virtual_value_csv(std::ostream& os, const VirtualValueReport& r);
void write_iron_csv(std::ostream& os, const IronedCurve& ic, const Distribution& d);
void write_bid_csv(std::ostream& os, const BidFunction& b);

/// Builds a tabulated distribution from two columns of a headered CSV
/// (e.g. value and q of an `iron` dump). Cdf values within 1e-9 of 0 or 1 at
/// the ends are snapped to 0 and 1.
TabulatedSpec load_tabulated_csv(std::istream& is, const std::string& value_column, const std::string& cdf_column);

} // namespace allpay
