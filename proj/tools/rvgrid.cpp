// Command-line front end: adversarial rendezvous experiments, property
// verification suites, and decomposition / cost inspection.

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "rvgrid/checks.hpp"
#include "rvgrid/decomposition.hpp"
#include "rvgrid/simulator.hpp"

using nlohmann::json;
using namespace rvgrid;

namespace {

struct CliError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

PatternDescriptor parse_descriptor(const std::string& text) {
    const auto open = text.find('(');
    const auto close = text.rfind(')');
    if (open == std::string::npos || close == std::string::npos || close < open)
        throw CliError("malformed descriptor: " + text);
    const std::string name = text.substr(0, open);
    std::vector<std::string> args;
    std::string cur;
    for (char c : text.substr(open + 1, close - open - 1)) {
        if (c == ',') {
            args.push_back(cur);
            cur.clear();
        } else if (!isspace(static_cast<unsigned char>(c))) {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) args.push_back(cur);
    auto num = [&](std::size_t i) -> std::uint64_t {
        return std::stoull(args.at(i));
    };
    if (name == "Seed" && args.size() == 1) return PatternDescriptor::seed(num(0));
    if (name == "RepeatSeed" && args.size() == 2)
        return PatternDescriptor::repeat_seed(num(0), Count::from_decimal(args[1]));
    if (name == "Berry" && args.size() == 2) return PatternDescriptor::berry(num(0), num(1));
    if (name == "Cloudberry" && args.size() == 4)
        return PatternDescriptor::cloudberry(num(0), num(1), num(2), num(3));
    throw CliError("malformed descriptor: " + text);
}

Count count_from_json(const json& j) {
    if (j.is_number_unsigned()) return Count(j.get<std::uint64_t>());
    if (j.is_string()) return Count::from_decimal(j.get<std::string>());
    throw CliError("counts must be unsigned integers or decimal strings");
}

Scenario scenario_from_json(const json& j) {
    Scenario sc;
    sc.label_a = j.at("label_a").get<std::uint64_t>();
    sc.label_b = j.at("label_b").get<std::uint64_t>();
    const auto& off = j.at("offset");
    sc.dx = off.at(0).get<std::int64_t>();
    sc.dy = off.at(1).get<std::int64_t>();
    const std::string strat = j.at("strategy").get<std::string>();
    const auto kind = strategy_from_name(strat);
    if (!kind) throw CliError("unknown strategy: " + strat);
    sc.strategy = *kind;
    if (j.contains("seed")) sc.seed = j.at("seed").get<std::uint64_t>();
    if (sc.strategy == StrategyKind::Random && !j.contains("seed"))
        throw CliError("random strategy requires an explicit seed");
    if (j.contains("budget")) sc.budget = count_from_json(j.at("budget"));
    if (j.contains("stop_bound")) sc.stop_bound = j.at("stop_bound").get<std::uint64_t>();
    if (j.contains("freeze_descriptors"))
        sc.freeze_descriptors = j.at("freeze_descriptors").get<std::uint64_t>();
    sc.validate();
    return sc;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out += "\"";
    return out;
}

int cmd_simulate(const std::string& config_path, const std::string& out_dir, bool fast_forward,
                 bool trace, std::optional<std::string> budget_override,
                 std::optional<std::uint64_t> seed_override, unsigned jobs) {
    std::ifstream in(config_path);
    if (!in) throw CliError("cannot open config: " + config_path);
    json cfg = json::parse(in);
    std::vector<Scenario> scenarios;
    for (const auto& j : cfg.at("scenarios")) scenarios.push_back(scenario_from_json(j));
    for (auto& sc : scenarios) {
        if (budget_override) sc.budget = Count::from_decimal(*budget_override);
        if (seed_override) sc.seed = *seed_override;
    }

    std::filesystem::create_directories(out_dir);
    std::vector<std::string> rows(scenarios.size());
    std::vector<bool> bound_ok(scenarios.size(), true);

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t idx = next.fetch_add(1);
            if (idx >= scenarios.size()) return;
            const Scenario& sc = scenarios[idx];
            RunOptions opt;
            opt.fast_forward = fast_forward;
            std::ofstream trace_out;
            if (trace) {
                trace_out.open(out_dir + "/trace_" + std::to_string(idx) + ".jsonl");
                opt.trace = [&trace_out](const TraceRecord& r) {
                    json j{{"step", r.step},        {"agent", std::string(1, r.agent)},
                           {"context", r.context},  {"pos_before", r.pos_before},
                           {"pos_after", r.pos_after}, {"traversals_a", r.trav_a},
                           {"traversals_b", r.trav_b}};
                    trace_out << j.dump() << "\n";
                };
            }
            const MeetingReport rep = run(sc, opt);
            if (sc.stop_bound && rep.stop_reason != StopReason::Meeting) bound_ok[idx] = false;

            const std::uint64_t d1 = good_assumption(sc);
            const std::size_t lp =
                first_diff_index(transform(sc.label_a), transform(sc.label_b));
            std::ostringstream row;
            row << idx << ',' << sc.label_a << ',' << sc.label_b << ',' << sc.dx << ',' << sc.dy
                << ',' << sc.initial_distance() << ',' << lp << ',' << d1 << ','
                << name_of(sc.strategy) << ',' << sc.seed << ',' << (fast_forward ? 1 : 0) << ','
                << (rep.met ? 1 : 0) << ',' << name_of(rep.stop_reason) << ','
                << csv_escape(rep.met ? rep.location.to_string() : "") << ','
                << rep.traversals_a.to_string() << ',' << rep.traversals_b.to_string() << ','
                << csv_escape(rep.context_a) << ',' << csv_escape(rep.context_b);
            rows[idx] = row.str();
        }
    };
    if (jobs <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    std::ofstream csv(out_dir + "/summary.csv");
    csv << "scenario,label_a,label_b,dx,dy,D,l_prime,d1,strategy,seed,fast_forward,met,"
           "stop_reason,location,traversals_a,traversals_b,context_a,context_b\n";
    for (const auto& row : rows) csv << row << "\n";

    bool all_ok = true;
    for (bool ok : bound_ok) all_ok = all_ok && ok;
    std::cout << "wrote " << out_dir << "/summary.csv (" << rows.size() << " scenarios)\n";
    return all_ok ? 0 : 1;
}

int cmd_verify(const std::string& suite) {
    std::vector<checks::CheckResult> results;
    if (suite == "patterns") results = checks::patterns_suite();
    else if (suite == "costs") results = checks::costs_suite();
    else if (suite == "decomposition") results = checks::decomposition_suite();
    else if (suite == "push") results = checks::push_suite();
    else throw CliError("unknown suite: " + suite +
                        " (expected patterns|decomposition|push|costs)");
    bool all = true;
    for (const auto& r : results) {
        std::cout << (r.passed ? "[pass] " : "[FAIL] ") << r.name;
        if (!r.detail.empty()) std::cout << "  (" << r.detail << ")";
        std::cout << "\n";
        all = all && r.passed;
    }
    std::cout << (all ? "suite passed" : "suite FAILED") << "\n";
    return all ? 0 : 1;
}

int cmd_bd(std::uint64_t d, std::uint64_t label) {
    const auto seq = bd(ProcedureCall::assumption(d), transform(label));
    std::cout << "index,type,x,y,z,h,n\n";
    for (std::size_t i = 0; i < seq.size(); ++i) {
        const auto& p = seq[i];
        std::cout << i << ',' << name_of(p.type) << ',' << p.x << ',' << p.y << ',' << p.z << ','
                  << p.h << ',' << p.n.to_string() << "\n";
    }
    return 0;
}

int cmd_cost(const std::string& desc_text) {
    const auto d = parse_descriptor(desc_text);
    std::cout << cost(d).to_string() << "\n";
    return 0;
}

int cmd_inspect(const std::vector<std::string>& words) {
    if (words.empty()) throw CliError("inspect requires a query");
    const std::string& what = words[0];
    if (what == "transform" && words.size() == 2) {
        std::cout << transform(std::stoull(words[1])).to_string() << "\n";
        return 0;
    }
    if (what == "rho-r" && words.size() == 2) {
        const std::uint64_t d = std::stoull(words[1]);
        std::cout << "rho(" << d << ")=" << rho(d).to_string() << " r(" << d
                  << ")=" << radius_r(d).to_string() << "\n";
        return 0;
    }
    if (what == "bd" && words.size() == 3)
        return cmd_bd(std::stoull(words[1]), std::stoull(words[2]));
    if (what == "cost" && words.size() == 2) return cmd_cost(words[1]);
    throw CliError("unknown inspect query (expected: transform L | rho-r D | bd D L | cost DESC)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"deterministic rendezvous on the infinite grid: simulator and verifiers"};
    app.require_subcommand(1);

    // simulate
    auto* sim = app.add_subcommand("simulate", "run scenarios from a config file");
    std::string config_path, out_dir = "out";
    bool no_ff = false, trace = false;
    std::string budget_override;
    std::uint64_t seed_override = 0;
    bool have_seed = false;
    unsigned jobs = 1;
    sim->add_option("--config", config_path, "JSON config with a scenarios array")->required();
    sim->add_option("--out", out_dir, "output directory");
    sim->add_flag("--no-fast-forward", no_ff, "advance move by move");
    sim->add_flag("--trace", trace, "write per-decision JSONL traces");
    sim->add_option("--budget", budget_override, "override budget (decimal)");
    sim->add_option("--seed", seed_override, "override seed")->each([&](const std::string&) {
        have_seed = true;
    });
    sim->add_option("--jobs", jobs, "worker threads");

    // verify
    auto* ver = app.add_subcommand("verify", "run a property suite");
    std::string suite;
    ver->add_option("suite", suite, "patterns|decomposition|push|costs")->required();

    // inspect and its shortcuts
    auto* ins = app.add_subcommand("inspect", "print sequences and values");
    std::vector<std::string> inspect_words;
    ins->add_option("query", inspect_words, "transform L | rho-r D | bd D L | cost DESC")
        ->required();

    auto* bdc = app.add_subcommand("bd", "print the basic decomposition of Assumption(d)");
    std::uint64_t bd_d = 1, bd_label = 0;
    bdc->add_option("d", bd_d, "power-of-two phase parameter")->required();
    bdc->add_option("label", bd_label, "agent label")->required();

    auto* costc = app.add_subcommand("cost", "print the exact cost of a pattern descriptor");
    std::string cost_desc;
    costc->add_option("descriptor", cost_desc, "e.g. 'Cloudberry(1,1,1,0)'")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed())
            return cmd_simulate(config_path, out_dir, !no_ff, trace,
                                budget_override.empty()
                                    ? std::nullopt
                                    : std::optional<std::string>(budget_override),
                                have_seed ? std::optional<std::uint64_t>(seed_override)
                                          : std::nullopt,
                                jobs);
        if (ver->parsed()) return cmd_verify(suite);
        if (ins->parsed()) return cmd_inspect(inspect_words);
        if (bdc->parsed()) return cmd_bd(bd_d, bd_label);
        if (costc->parsed()) return cmd_cost(cost_desc);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
