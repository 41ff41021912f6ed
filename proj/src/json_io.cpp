#include "allpay/json_io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include "allpay/error.hpp"

namespace allpay {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

Json optional_json(const std::optional<double>& v) {
    return v ? Json(*v) : Json(nullptr);
}

double number(const Json& params, const char* key) {
    if (!params.contains(key) || !params.at(key).is_number()) {
        throw InvalidParameter(std::string("missing numeric field \"") + key + "\"");
    }
    return params.at(key).get<double>();
}

int count(const Json& params, const char* key) {
    if (!params.contains(key) || !params.at(key).is_number_integer()) {
        throw InvalidParameter(std::string("missing integer field \"") + key + "\"");
    }
    return params.at(key).get<int>();
}

const Json& params_of(const Json& j) {
    if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string()) {
        throw InvalidParameter("expected an object with a string \"kind\"");
    }
    if (!j.contains("params") || !j.at("params").is_object()) {
        throw InvalidParameter("expected a \"params\" object");
    }
    return j.at("params");
}

void write_row(std::ostream& os, std::initializer_list<double> values) {
    bool first = true;
    for (double v : values) {
        if (!first) os << ',';
        os << v;
        first = false;
    }
    os << '\n';
}

} // namespace

Json to_json(const DistributionSpec& spec) {
    return std::visit(
        Overloaded{
            [](const UniformSpec& u) { return Json{{"kind", "uniform"}, {"params", {{"a", u.a}, {"b", u.b}}}}; },
            [](const ExponentialSpec& e) { return Json{{"kind", "exponential"}, {"params", {{"rate", e.rate}}}}; },
            [](const PowerSpec& p) { return Json{{"kind", "power"}, {"params", {{"alpha", p.alpha}}}}; },
            [](const MixtureSpec& m) {
                Json segs = Json::array();
                for (const auto& s : m.segments) segs.push_back({{"lo", s.lo}, {"hi", s.hi}, {"weight", s.weight}});
                return Json{{"kind", "mixture"}, {"params", {{"segments", segs}}}};
            },
            [](const TabulatedSpec& t) {
                Json pts = Json::array();
                for (const auto& p : t.points) pts.push_back({p[0], p[1]});
                return Json{{"kind", "tabulated"}, {"params", {{"points", pts}}}};
            },
        },
        spec);
}

DistributionSpec distribution_spec_from_json(const Json& j) {
    const Json& p = params_of(j);
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "uniform") return UniformSpec{number(p, "a"), number(p, "b")};
    if (kind == "exponential") return ExponentialSpec{number(p, "rate")};
    if (kind == "power") return PowerSpec{number(p, "alpha")};
    if (kind == "mixture") {
        if (!p.contains("segments") || !p.at("segments").is_array()) {
            throw InvalidParameter("mixture: missing \"segments\" array");
        }
        MixtureSpec m;
        for (const Json& s : p.at("segments")) {
            m.segments.push_back({number(s, "lo"), number(s, "hi"), number(s, "weight")});
        }
        return m;
    }
    if (kind == "tabulated") {
        if (!p.contains("points") || !p.at("points").is_array()) {
            throw InvalidParameter("tabulated: missing \"points\" array");
        }
        TabulatedSpec t;
        for (const Json& pt : p.at("points")) {
            if (!pt.is_array() || pt.size() != 2 || !pt[0].is_number() || !pt[1].is_number()) {
                throw InvalidParameter("tabulated: each point must be [value, cdf]");
            }
            t.points.push_back({pt[0].get<double>(), pt[1].get<double>()});
        }
        return t;
    }
    throw InvalidParameter("unknown distribution kind \"" + kind + "\"");
}

Json to_json(const ContestSpec& spec) {
    return std::visit(
        Overloaded{
            [](const SymmetricHighestWins& h) {
                Json forbidden = Json::array();
                for (const auto& f : h.forbidden) {
                    forbidden.push_back({{"lo", f.lo},
                                         {"hi", f.hi},
                                         {"lo_closed", f.lo_closed},
                                         {"hi_closed", f.hi_closed},
                                         {"allowed_bid", f.allowed_bid}});
                }
                Json pooling = Json::array();
                for (const auto& p : h.pooling) pooling.push_back({{"lo", p.lo}, {"hi", p.hi}});
                return Json{{"kind", "symmetric_highest_wins"},
                            {"params",
                             {{"n", h.n},
                              {"reserve_bid", h.reserve_bid},
                              {"reserve_value", optional_json(h.reserve_value)},
                              {"forbidden_intervals", forbidden},
                              {"pooling_intervals", pooling},
                              {"tie_rule", h.tie_rule}}}};
            },
            [](const StaticPrizes& s) {
                return Json{{"kind", "static_prizes"}, {"params", {{"n", s.n}, {"prizes", s.prizes}}}};
            },
            [](const AsymmetricTwoAgent& a) {
                return Json{{"kind", "asymmetric_two_agent"},
                            {"params",
                             {{"reserve_value", a.reserve_value},
                              {"favored_agent_guarantee_value", a.favored_agent_guarantee_value}}}};
            },
        },
        spec);
}

ContestSpec contest_spec_from_json(const Json& j) {
    const Json& p = params_of(j);
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "symmetric_highest_wins") {
        SymmetricHighestWins h;
        h.n = count(p, "n");
        h.reserve_bid = p.contains("reserve_bid") ? number(p, "reserve_bid") : 0.0;
        if (p.contains("reserve_value") && !p.at("reserve_value").is_null()) h.reserve_value = number(p, "reserve_value");
        if (p.contains("tie_rule")) {
            h.tie_rule = p.at("tie_rule").get<std::string>();
            if (h.tie_rule != "equal-split") throw InvalidParameter("tie_rule must be \"equal-split\"");
        }
        if (p.contains("forbidden_intervals")) {
            for (const Json& f : p.at("forbidden_intervals")) {
                ForbiddenInterval fi;
                fi.lo = number(f, "lo");
                fi.hi = number(f, "hi");
                fi.lo_closed = f.value("lo_closed", true);
                fi.hi_closed = f.value("hi_closed", false);
                fi.allowed_bid = number(f, "allowed_bid");
                if (!(fi.lo <= fi.hi)) throw InvalidParameter("forbidden interval needs lo <= hi");
                h.forbidden.push_back(fi);
            }
            for (std::size_t i = 1; i < h.forbidden.size(); ++i) {
                if (h.forbidden[i].lo < h.forbidden[i - 1].hi) {
                    throw InvalidParameter("forbidden intervals must be sorted and disjoint");
                }
            }
        }
        if (p.contains("pooling_intervals")) {
            for (const Json& iv : p.at("pooling_intervals")) h.pooling.push_back({number(iv, "lo"), number(iv, "hi")});
        }
        if (h.n < 1) throw InvalidParameter("n must be at least 1");
        if (h.reserve_bid < 0.0) throw InvalidParameter("reserve_bid must be nonnegative");
        return h;
    }
    if (kind == "static_prizes") {
        StaticPrizes s;
        s.n = count(p, "n");
        if (!p.contains("prizes") || !p.at("prizes").is_array()) throw InvalidParameter("missing \"prizes\" array");
        s.prizes = p.at("prizes").get<std::vector<double>>();
        validate_prizes(s.n, s.prizes);
        return s;
    }
    if (kind == "asymmetric_two_agent") {
        return AsymmetricTwoAgent{number(p, "reserve_value"), number(p, "favored_agent_guarantee_value")};
    }
    throw InvalidParameter("unknown contest kind \"" + kind + "\"");
}

Json to_json(const EvaluationReport& r) {
    return Json{{"mp_exact", r.mp_exact},
                {"rev_exact", r.rev_exact},
                {"mp_virtual_surplus", optional_json(r.mp_virtual_surplus)},
                {"utilization_ratio", r.utilization_ratio},
                {"opt_revenue", optional_json(r.opt_revenue)},
                {"approximation_ratio", optional_json(r.approximation_ratio)}};
}

Json to_json(const VirtualValueReport& r) {
    return Json{{"n", r.n},
                {"grid", r.grid},
                {"phi", r.phi},
                {"psi", r.psi},
                {"hazard", r.hazard},
                {"regular_for_revenue", r.regular_for_revenue},
                {"n_regular_for_mp", r.n_regular_for_mp},
                {"mhr", r.mhr},
                {"psi_nonneg_from", optional_json(r.psi_nonneg_from)}};
}

Json to_json(const SimulationReport& r) {
    return Json{{"trials", r.trials},
                {"mp_mean", r.mp_mean},
                {"mp_stderr", r.mp_stderr},
                {"rev_mean", r.rev_mean},
                {"rev_stderr", r.rev_stderr},
                {"mean_winner_share", r.mean_winner_share},
                {"mean_effort", r.mean_effort},
                {"seed", r.seed}};
}

Json to_json(const AsymmetricReport& r) {
    return Json{{"evaluation", to_json(r.eval)},
                {"symmetric_mp", r.symmetric_mp},
                {"reserve_value", r.reserve_value},
                {"reserve_bid", r.reserve_bid},
                {"guarantee_value", r.guarantee_value},
                {"favored_low_bid", r.favored_low_bid},
                {"favored_high_bid", r.favored_high_bid}};
}

Json to_json(const StaticComparison& r) {
    Json rows = Json::array();
    for (const auto& row : r.rows) rows.push_back({{"prizes", row.prizes}, {"mp", row.mp}, {"revenue", row.revenue}});
    return Json{{"rows", rows},
                {"winner_take_all_mp", r.winner_take_all_mp},
                {"winner_take_all_is_max", r.winner_take_all_is_max}};
}

Json to_json(const ConvergenceTable& t) {
    Json rows = Json::array();
    for (const auto& row : t.rows) {
        rows.push_back({{"trials", row.trials},
                        {"mp_mean", row.mp_mean},
                        {"mp_stderr", row.mp_stderr},
                        {"abs_error", row.abs_error},
                        {"within_3se", row.within_3se}});
    }
    return Json{{"quadrature_mp", t.quadrature_mp}, {"rows", rows}, {"consistent", t.consistent}};
}

Json parse_json(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw InvalidParameter(std::string("malformed JSON: ") + e.what());
    }
}

Json load_json_argument(const std::string& path_or_json) {
    auto first = path_or_json.find_first_not_of(" \t\n");
    if (first != std::string::npos && path_or_json[first] == '{') return parse_json(path_or_json);
    std::ifstream in(path_or_json);
    if (!in) throw InvalidParameter("cannot open \"" + path_or_json + "\"");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_json(buf.str());
}

void write_virtual_value_csv(std::ostream& os, const VirtualValueReport& r) {
    os << std::setprecision(17) << "value,phi,psi,hazard\n";
    for (std::size_t i = 0; i < r.grid.size(); ++i) write_row(os, {r.grid[i], r.phi[i], r.psi[i], r.hazard[i]});
}

void write_iron_csv(std::ostream& os, const IronedCurve& ic, const Distribution& d) {
    os << std::setprecision(17) << "q,value,R,envelope,psi,psi_bar\n";
    const auto& c = ic.curve;
    for (std::size_t i = 0; i < c.q.size(); ++i) {
        write_row(os, {c.q[i], d.quantile(c.q[i]), c.R[i], ic.envelope[i], c.psi[i], ic.psi_bar[i]});
    }
}

void write_bid_csv(std::ostream& os, const BidFunction& b) {
    os << std::setprecision(17) << "value,bid\n";
    auto grid = b.grid();
    auto bids = b.bids();
    for (std::size_t i = 0; i < grid.size(); ++i) write_row(os, {grid[i], bids[i]});
}

TabulatedSpec load_tabulated_csv(std::istream& is, const std::string& value_column, const std::string& cdf_column) {
    std::string line;
    if (!std::getline(is, line)) throw InvalidParameter("csv: empty input");
    std::vector<std::string> header;
    {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) header.push_back(cell);
    }
    auto column = [&](const std::string& name) {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (header[i] == name) return i;
        }
        throw InvalidParameter("csv: no column \"" + name + "\"");
    };
    std::size_t vi = column(value_column);
    std::size_t qi = column(cdf_column);
    TabulatedSpec t;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::vector<double> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                cells.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw InvalidParameter("csv: non-numeric cell \"" + cell + "\"");
            }
        }
        if (cells.size() != header.size()) throw InvalidParameter("csv: ragged row");
        std::array<double, 2> pt{cells[vi], cells[qi]};
        // Plateaus in value (possible for flat bid curves) are skipped.
        if (!t.points.empty() && !(pt[0] > t.points.back()[0])) continue;
        t.points.push_back(pt);
    }
    if (t.points.size() < 2) throw InvalidParameter("csv: need at least two rows");
    if (t.points.front()[1] <= 1e-9) t.points.front()[1] = 0.0;
    if (t.points.back()[1] >= 1.0 - 1e-9) t.points.back()[1] = 1.0;
    return t;
}

} // namespace allpay
