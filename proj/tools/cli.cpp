#include "cli.hpp"

#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"

#include "allpay/contest.hpp"
#include "allpay/error.hpp"
#include "allpay/ironing.hpp"
#include "allpay/json_io.hpp"
#include "allpay/repro.hpp"
#include "allpay/simulation.hpp"
#include "allpay/virtual_values.hpp"

namespace allpay {

namespace {

struct Options {
    std::string dist;
    std::string contest;
    std::optional<int> n;
    std::optional<int> grid;
    std::string csv;
    std::string out;
    std::uint64_t trials = 100000;
    std::uint64_t seed = 1;
    std::vector<std::string> prizes;
    std::optional<int> criterion;
    bool json = false;
};

Distribution load_distribution(const Options& o) {
    if (o.dist.empty()) throw InvalidParameter("--dist is required");
    return Distribution(distribution_spec_from_json(load_json_argument(o.dist)));
}

int require_n(const Options& o) {
    if (!o.n) throw InvalidParameter("--n is required");
    return *o.n;
}

ContestSpec load_contest(const Options& o, const Distribution& d) {
    if (o.contest.empty()) return design_optimal_contest(d, require_n(o));
    ContestSpec c = contest_spec_from_json(load_json_argument(o.contest));
    if (o.n && *o.n != contestants(c)) {
        throw InvalidParameter("--n " + std::to_string(*o.n) + " disagrees with the contest's " +
                               std::to_string(contestants(c)) + " contestants");
    }
    return c;
}

template <class Writer>
void emit(const std::string& path, std::ostream& out, Writer&& write) {
    if (path.empty() || path == "-") {
        write(out);
        return;
    }
    std::ofstream f(path);
    if (!f) throw InvalidParameter("cannot open " + path + " for writing");
    write(f);
}

std::vector<double> parse_prizes(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
        } catch (const std::logic_error&) {
            throw InvalidParameter("--prizes: cannot parse '" + item + "'");
        }
    }
    return out;
}

void print_repro(std::ostream& out, const std::vector<ReproLine>& lines) {
    out << std::setprecision(10);
    for (const auto& l : lines) {
        out << (l.pass ? "PASS" : "FAIL") << "  [" << l.criterion << "] " << l.claim_id << "  reference=" << l.reference_value
            << "  computed=" << l.computed_value << "  " << to_string(l.comparison) << " tol=" << l.tolerance << '\n';
    }
}

int run(const std::string& cmd, const Options& o, std::ostream& out, std::ostream& err) {
    if (cmd == "reproduce") {
        std::vector<ReproLine> lines = o.criterion ? criterion_lines(*o.criterion) : reproduce_all();
        if (lines.empty()) throw InvalidParameter("--criterion must be between 1 and " + std::to_string(kCriterionCount));
        bool ok = true;
        for (const auto& l : lines) ok = ok && l.pass;
        if (o.json) {
            Json arr = Json::array();
            for (const auto& l : lines) {
                arr.push_back({{"criterion", l.criterion},
                               {"claim_id", l.claim_id},
                               {"reference_value", l.reference_value},
                               {"computed_value", l.computed_value},
                               {"tolerance", l.tolerance},
                               {"comparison", to_string(l.comparison)},
                               {"pass", l.pass}});
            }
            out << arr.dump(2) << '\n';
        } else {
            print_repro(out, lines);
        }
        return ok ? 0 : 2;
    }

    Distribution d = load_distribution(o);
    if (cmd == "analyze") {
        VirtualValueReport r = analyze(d, require_n(o), o.grid.value_or(kDefaultAnalyzeGrid));
        out << to_json(r).dump(2) << '\n';
        if (!o.csv.empty()) emit(o.csv, out, [&](std::ostream& os) { write_virtual_value_csv(os, r); });
    } else if (cmd == "design") {
        out << to_json(ContestSpec(design_optimal_contest(d, require_n(o)))).dump(2) << '\n';
    } else if (cmd == "bid-curve") {
        ContestSpec c = load_contest(o, d);
        if (std::holds_alternative<AsymmetricTwoAgent>(c)) {
            throw InvalidParameter("bid-curve needs a symmetric contest");
        }
        BidFunction b = equilibrium_bids(d, c, o.grid.value_or(kDefaultBidGrid));
        emit(o.out, out, [&](std::ostream& os) { write_bid_csv(os, b); });
    } else if (cmd == "iron") {
        IronedCurve ic = iron(d, require_n(o), o.grid.value_or(kDefaultIroningGrid));
        emit(o.out, out, [&](std::ostream& os) { write_iron_csv(os, ic, d); });
    } else if (cmd == "eval") {
        ContestSpec c = load_contest(o, d);
        if (const auto* a = std::get_if<AsymmetricTwoAgent>(&c)) {
            out << to_json(evaluate_asymmetric(d, *a)).dump(2) << '\n';
        } else {
            out << to_json(ratios(d, contestants(c), c)).dump(2) << '\n';
        }
    } else if (cmd == "simulate") {
        ContestSpec c = load_contest(o, d);
        int n = contestants(c);
        std::ofstream csv;
        TrialObserver observer;
        if (!o.csv.empty()) {
            csv.open(o.csv);
            if (!csv) throw InvalidParameter("cannot open " + o.csv + " for writing");
            csv << std::setprecision(17) << "trial";
            for (int i = 0; i < n; ++i) csv << ",skill" << i;
            for (int i = 0; i < n; ++i) csv << ",bid" << i;
            csv << ",max_bid,sum_bids\n";
            observer = [&csv](const TrialRecord& t) {
                csv << t.trial;
                for (double s : t.skills) csv << ',' << s;
                for (double b : t.bids) csv << ',' << b;
                csv << ',' << t.max_bid << ',' << t.sum_bids << '\n';
            };
        }
        out << to_json(simulate(d, n, c, o.trials, o.seed, observer)).dump(2) << '\n';
    } else if (cmd == "compare-static") {
        int n = require_n(o);
        std::vector<std::vector<double>> vectors;
        for (const auto& p : o.prizes) {
            vectors.push_back(parse_prizes(p));
            validate_prizes(n, vectors.back());
            if (!prizes_nonincreasing(vectors.back())) {
                err << "warning: prize vector '" << p << "' is not nonincreasing\n";
            }
        }
        out << to_json(compare_static(d, n, vectors)).dump(2) << '\n';
    }
    return 0;
}

} // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Optimal all-pay contests for crowdsourcing: analysis, design, evaluation and simulation"};
    app.require_subcommand(1);
    Options o;

    auto add_dist = [&](CLI::App* s) {
        s->add_option("--dist", o.dist, "distribution JSON file, or inline JSON")->required();
    };
    auto add_n = [&](CLI::App* s, bool required) {
        auto* opt = s->add_option("--n", o.n, "number of contestants")->check(CLI::Range(1, 1000));
        if (required) opt->required();
    };
    auto add_grid = [&](CLI::App* s) { s->add_option("--grid", o.grid, "grid size")->check(CLI::PositiveNumber); };
    auto add_contest = [&](CLI::App* s, const char* what) { s->add_option("--contest", o.contest, what); };

    auto* analyze = app.add_subcommand("analyze", "virtual values, hazard rate and regularity verdicts");
    add_dist(analyze);
    add_n(analyze, true);
    add_grid(analyze);
    analyze->add_option("--csv", o.csv, "also write value,phi,psi,hazard CSV here");

    auto* design = app.add_subcommand("design", "optimal symmetric contest");
    add_dist(design);
    add_n(design, true);

    auto* bid = app.add_subcommand("bid-curve", "equilibrium bid function as value,bid CSV");
    add_dist(bid);
    add_n(bid, false);
    add_grid(bid);
    add_contest(bid, "contest JSON (default: the optimal contest for --n)");
    bid->add_option("--out", o.out, "output CSV (default stdout)");

    auto* ironc = app.add_subcommand("iron", "quantile-space antiderivative and its convex envelope as CSV");
    add_dist(ironc);
    add_n(ironc, true);
    add_grid(ironc);
    ironc->add_option("--out", o.out, "output CSV (default stdout)");

    auto* eval = app.add_subcommand("eval", "maximum payment, revenue and ratios of a contest");
    add_dist(eval);
    add_n(eval, false);
    add_contest(eval, "contest JSON (default: the optimal contest for --n)");

    auto* sim = app.add_subcommand("simulate", "Monte Carlo run of the equilibrium");
    add_dist(sim);
    add_n(sim, false);
    add_contest(sim, "contest JSON (default: the optimal contest for --n)");
    sim->add_option("--trials", o.trials, "number of simulated contests")->check(CLI::PositiveNumber);
    sim->add_option("--seed", o.seed, "RNG seed");
    sim->add_option("--csv", o.csv, "per-trial CSV output");

    auto* cmp = app.add_subcommand("compare-static", "winner-take-all against other static prize vectors");
    add_dist(cmp);
    add_n(cmp, true);
    cmp->add_option("--prizes", o.prizes, "comma-separated prize fractions; repeatable")->required();

    auto* repro = app.add_subcommand("reproduce", "run every acceptance check and print one line per claim");
    repro->add_option("--criterion", o.criterion, "only this criterion");
    repro->add_flag("--json", o.json, "JSON output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    }

    try {
        return run(app.get_subcommands().front()->get_name(), o, out, err);
    } catch (const NumericalFailure& e) {
        err << "numerical failure: " << e.what() << '\n';
        return 2;
    } catch (const InvalidParameter& e) {
        err << "invalid input: " << e.what() << '\n';
        return 1;
    } catch (const nlohmann::json::exception& e) {
        err << "invalid input: " << e.what() << '\n';
        return 1;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
}

} // namespace allpay
