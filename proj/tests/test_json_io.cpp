#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <sstream>

#include "allpay/error.hpp"
#include "allpay/json_io.hpp"

using namespace allpay;

TEST_CASE("distribution JSON uses the documented field names") {
    CHECK(to_json(DistributionSpec(UniformSpec{0.0, 1.0})) == Json::parse(R"({"kind":"uniform","params":{"a":0,"b":1}})"));
    CHECK(to_json(DistributionSpec(ExponentialSpec{1.0})) == Json::parse(R"({"kind":"exponential","params":{"rate":1}})"));
    CHECK(to_json(DistributionSpec(PowerSpec{1.5})) == Json::parse(R"({"kind":"power","params":{"alpha":1.5}})"));
    CHECK(to_json(DistributionSpec(MixtureSpec{{{1.0, 2.0, 0.75}, {2.0, 3.0, 0.25}}})) ==
          Json::parse(R"({"kind":"mixture","params":{"segments":[{"lo":1,"hi":2,"weight":0.75},{"lo":2,"hi":3,"weight":0.25}]}})"));
    CHECK(to_json(DistributionSpec(TabulatedSpec{{{{0.0, 0.0}}, {{1.0, 1.0}}}})) ==
          Json::parse(R"({"kind":"tabulated","params":{"points":[[0,0],[1,1]]}})"));
}

TEST_CASE("distribution round trip") {
    std::vector<DistributionSpec> specs{UniformSpec{-1.0, 2.5}, ExponentialSpec{0.3}, PowerSpec{2.0},
                                        MixtureSpec{{{0.0, 1.0, 0.4}, {1.0, 5.0, 0.6}}},
                                        TabulatedSpec{{{{0.0, 0.0}}, {{0.3, 0.2}}, {{0.7, 0.6}}, {{1.0, 1.0}}}}};
    for (const auto& s : specs) {
        Json j = to_json(s);
        DistributionSpec back = distribution_spec_from_json(parse_json(j.dump()));
        CHECK(to_json(back) == j);
    }
}

TEST_CASE("malformed distribution JSON") {
    CHECK_THROWS_AS(parse_json("{not json"), InvalidParameter);
    CHECK_THROWS_AS(distribution_spec_from_json(Json::parse(R"({"kind":"gamma","params":{}})")), InvalidParameter);
    CHECK_THROWS_AS(distribution_spec_from_json(Json::parse(R"({"kind":"uniform","params":{"a":0}})")), InvalidParameter);
    CHECK_THROWS_AS(distribution_spec_from_json(Json::parse(R"({"params":{"a":0,"b":1}})")), InvalidParameter);
    CHECK_THROWS_AS(distribution_spec_from_json(Json::parse(R"({"kind":"exponential","params":{"rate":"1"}})")),
                    InvalidParameter);
    CHECK_THROWS_AS(load_json_argument("/nonexistent/file.json"), InvalidParameter);
}

TEST_CASE("contest round trip") {
    SymmetricHighestWins h;
    h.n = 2;
    h.reserve_bid = 0.5708;
    h.reserve_value = 1.5055;
    h.pooling = {{1.918, 2.167}};
    h.forbidden = {{1.10, 1.199, true, false, 1.10}, {1.199, 1.31, false, true, 1.199}};
    std::vector<ContestSpec> specs{h, StaticPrizes{3, {0.5, 0.3, 0.2}}, AsymmetricTwoAgent{0.63, 0.75}};
    for (const auto& c : specs) {
        Json j = to_json(c);
        CHECK(to_json(contest_spec_from_json(parse_json(j.dump()))) == j);
    }
    Json j = to_json(ContestSpec(h));
    CHECK(j["kind"] == "symmetric_highest_wins");
    CHECK(j["params"]["tie_rule"] == "equal-split");
    CHECK(j["params"]["forbidden_intervals"][0]["allowed_bid"] == 1.10);

    Json plain = Json::parse(R"({"kind":"symmetric_highest_wins","params":{"n":3,"reserve_bid":0.25}})");
    auto parsed = std::get<SymmetricHighestWins>(contest_spec_from_json(plain));
    CHECK(parsed.n == 3);
    CHECK_FALSE(parsed.reserve_value.has_value());
    CHECK(parsed.forbidden.empty());
}

TEST_CASE("malformed contest JSON") {
    CHECK_THROWS_AS(contest_spec_from_json(Json::parse(R"({"kind":"static_prizes","params":{"n":2,"prizes":[0.6,0.6]}})")),
                    InvalidParameter);
    CHECK_THROWS_AS(contest_spec_from_json(Json::parse(R"({"kind":"symmetric_highest_wins","params":{"n":2,"tie_rule":"random"}})")),
                    InvalidParameter);
    CHECK_THROWS_AS(contest_spec_from_json(Json::parse(R"({"kind":"symmetric_highest_wins","params":{"n":2,
        "forbidden_intervals":[{"lo":2,"hi":1,"allowed_bid":2}]}})")),
                    InvalidParameter);
    CHECK_THROWS_AS(contest_spec_from_json(Json::parse(R"({"kind":"lottery","params":{}})")), InvalidParameter);
}

TEST_CASE("report JSON") {
    EvaluationReport e;
    e.mp_exact = 0.25;
    e.rev_exact = 1.0 / 3.0;
    e.utilization_ratio = 4.0 / 3.0;
    Json j = to_json(e);
    CHECK(j["mp_exact"] == 0.25);
    CHECK(j["mp_virtual_surplus"].is_null());
    CHECK(j["opt_revenue"].is_null());
    SimulationReport s;
    s.trials = 10;
    s.seed = 3;
    CHECK(to_json(s)["trials"] == 10);
    CHECK(to_json(s)["seed"] == 3);
}

TEST_CASE("CSV writers have fixed headers") {
    Distribution u(UniformSpec{0.0, 1.0});
    std::ostringstream vv;
    write_virtual_value_csv(vv, analyze(u, 2, 64));
    CHECK(vv.str().rfind("value,phi,psi,hazard\n", 0) == 0);
    std::ostringstream ir;
    write_iron_csv(ir, iron(u, 2, 256), u);
    CHECK(ir.str().rfind("q,value,R,envelope,psi,psi_bar\n", 0) == 0);
    std::ostringstream bc;
    write_bid_csv(bc, equilibrium_bids(u, highest_bid_wins(u, 2, 0.5), 128));
    CHECK(bc.str().rfind("value,bid\n", 0) == 0);
    std::size_t rows = 0;
    for (char ch : ir.str()) rows += ch == '\n';
    CHECK(rows == 257);
}

TEST_CASE("iron CSV round-trips through the tabulated loader") {
    Distribution d(MixtureSpec{{{1.0, 2.0, 0.75}, {2.0, 3.0, 0.25}}});
    std::stringstream csv;
    write_iron_csv(csv, iron(d, 2, 1024), d);
    Distribution t(load_tabulated_csv(csv, "value", "q"));
    for (double v : {1.1, 1.5, 1.99, 2.4, 2.95}) CHECK(t.cdf(v) == doctest::Approx(d.cdf(v)).epsilon(1e-6));
    // The kink at 2 falls between grid nodes: error bounded by one q cell.
    CHECK(std::abs(t.cdf(2.0) - 0.75) < 1.0 / 1023);

    std::stringstream bad("value,q\n0,0\n1,x\n");
    CHECK_THROWS_AS(load_tabulated_csv(bad, "value", "q"), InvalidParameter);
    std::stringstream missing("value,cdf\n0,0\n1,1\n");
    CHECK_THROWS_AS(load_tabulated_csv(missing, "value", "q"), InvalidParameter);
}
