#include "cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "mcast/exact.hpp"
#include "mcast/harness.hpp"
#include "mcast/reductions.hpp"

namespace mcast::cli {

namespace {

using nlohmann::json;

std::vector<int> parse_m_list(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(std::stoi(item));
        } catch (const std::exception&) {
            throw UsageError("--m expects a comma-separated integer list, got '" + text + "'", 2);
        }
    }
    if (out.empty()) throw UsageError("--m list must not be empty", 2);
    for (std::size_t i = 1; i < out.size(); ++i)
        if (out[i] <= out[i - 1]) throw UsageError("--m list must be strictly ascending", 2);
    return out;
}

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw std::runtime_error(path + " is not valid JSON: " + e.what());
    }
    return j;
}

RateMatrix rates_from_json(const json& j) {
    const auto& rows = j.at("rates");
    if (rows.empty()) throw std::runtime_error("instance has no rate rows");
    RateMatrix rates(static_cast<int>(rows.size()), static_cast<int>(rows.at(0).size()));
    for (int i = 0; i < rates.rows; ++i) {
        const auto& row = rows.at(i);
        if (static_cast<int>(row.size()) != rates.cols)
            throw std::runtime_error("instance rate rows have unequal lengths");
        for (int k = 0; k < rates.cols; ++k) rates.at(i, k) = row.at(k).get<double>();
    }
    return rates;
}

ScenarioConfig load_with_seed(const std::string& path,
                              const std::optional<std::uint64_t>& seed) {
    ScenarioConfig cfg = load_config(path);
    if (seed) cfg.master_seed = *seed;
    return cfg;
}

int run_run(const RunCommand& cmd, const std::optional<std::uint64_t>& seed) {
    const ScenarioConfig cfg = load_with_seed(cmd.config_path, seed);
    std::filesystem::create_directories(cmd.out_dir);
    const auto records = run_scenario(cfg);
    write_csv(records, cmd.out_dir + "/metrics.csv");
    if (cfg.pf_unicast_ues > 0) {
        const auto pf_records = run_pf_comparison(cfg);
        write_pf_csv(pf_records, cmd.out_dir + "/pf_comparison.csv");
    }
    std::cout << "wrote " << records.size() << " records to " << cmd.out_dir << "/metrics.csv"
              << std::endl;
    return 0;
}

int run_sweep(const SweepCommand& cmd, const std::optional<std::uint64_t>& seed) {
    const ScenarioConfig base = load_with_seed(cmd.config_path, seed);
    std::filesystem::create_directories(cmd.out_dir);
    const std::vector<GroupingScheme> groupings =
        cmd.groupings.empty() ? std::vector<GroupingScheme>{base.grouping} : cmd.groupings;
    const std::vector<AllocatorKind> allocators =
        cmd.allocators.empty() ? std::vector<AllocatorKind>{base.allocator} : cmd.allocators;
    std::vector<SweepSummaryRow> summary;
    for (int m : cmd.m_list) {
        for (GroupingScheme g : groupings) {
            for (AllocatorKind a : allocators) {
                ScenarioConfig cfg = base;
                cfg.n_ues = m;
                cfg.grouping = g;
                cfg.allocator = a;
                const auto records = run_scenario(cfg);
                const std::string name = to_string(g) + "_" + to_string(a) + "_m" +
                                         std::to_string(m) + ".csv";
                write_csv(records, cmd.out_dir + "/" + name);
                summary.push_back(summarize(records));
            }
        }
    }
    write_summary_csv(summary, cmd.out_dir + "/summary.csv");
    std::cout << "wrote " << summary.size() << " sweep arms to " << cmd.out_dir << std::endl;
    return 0;
}

int run_exact(const ExactCommand& cmd) {
    const json j = load_json(cmd.instance_path);
    const RateMatrix rates = rates_from_json(j);
    const double r_req = j.at("r_req").get<double>();
    const long long budget = j.value("node_budget", 10'000'000LL);
    const ExactResult result = solve_blp_exact(rates, r_req, budget);
    switch (result.status) {
        case ExactResult::Status::Feasible:
            std::cout << "status=feasible optimum=" << result.optimum_used_prbs
                      << " nodes=" << result.nodes << std::endl;
            return 0;
        case ExactResult::Status::Infeasible:
            std::cout << "status=infeasible nodes=" << result.nodes << std::endl;
            return 0;
        case ExactResult::Status::BudgetExceeded:
            std::cerr << "error: node budget exceeded after " << result.nodes << " nodes"
                      << std::endl;
            return 1;
    }
    return 1;
}

int run_reduce3p(const Reduce3PCommand& cmd) {
    const json j = load_json(cmd.in_path);
    ThreePartitionInstance inst;
    inst.bound = j.at("bound").get<long long>();
    inst.m = j.at("m").get<int>();
    for (const auto& v : j.at("values")) inst.values.push_back(v.get<long long>());
    const auto [rates, r_req] = reduce_3p_to_blp(inst);

    json out;
    out["r_req"] = r_req;
    json rows = json::array();
    for (int i = 0; i < rates.rows; ++i) {
        json row = json::array();
        for (int k = 0; k < rates.cols; ++k) row.push_back(rates.at(i, k));
        rows.push_back(std::move(row));
    }
    out["rates"] = std::move(rows);
    std::ofstream f(cmd.out_path);
    if (!f) throw std::runtime_error("cannot write file: " + cmd.out_path);
    f << out.dump(2) << "\n";
    std::cout << "l=" << rates.rows << " n=" << rates.cols << " r_req=" << r_req << " -> "
              << cmd.out_path << std::endl;
    return 0;
}

int run_reducesat(const ReduceSatCommand& cmd) {
    const json j = load_json(cmd.in_path);
    const int declared = j.value("variables", -1);
    const BooleanFormula formula =
        BooleanFormula::parse(j.at("formula").get<std::string>(), declared);
    const GroupingInstance2 inst = reduce_sat_to_grouping(formula);
    const Grouping2Result result = solve_grouping2_bruteforce(inst);
    const auto assignment = extract_sat_assignment(formula, result);

    std::ostringstream line;
    line << "f_s_max=" << result.best_value << " verdict=" << (assignment ? "SAT" : "UNSAT");
    if (assignment) {
        line << " assignment=";
        for (bool b : *assignment) line << (b ? 'T' : 'F');
    }
    std::cout << line.str() << std::endl;

    if (!cmd.out_path.empty()) {
        json out;
        out["f_s_max"] = result.best_value;
        out["satisfiable"] = assignment.has_value();
        if (assignment) {
            json a = json::array();
            for (bool b : *assignment) a.push_back(b);
            out["assignment"] = std::move(a);
        }
        std::ofstream f(cmd.out_path);
        if (!f) throw std::runtime_error("cannot write file: " + cmd.out_path);
        f << out.dump(2) << "\n";
    }
    return 0;
}

int run_validate(const ValidateCommand& cmd) {
    const ScenarioConfig cfg = load_config(cmd.config_path);  // throws naming the field
    std::cout << "ok\n" << serialize_config(cfg);
    return 0;
}

}  // namespace

ParsedArgs parse_args(const std::vector<std::string>& args) {
    CLI::App app{"multicast grouping and PRB allocation simulator"};
    app.name("mcastsim");
    app.require_subcommand(1);
    app.fallthrough();

    std::uint64_t seed = 0;
    bool seed_set = false;
    app.add_option("--seed", seed, "override the config master seed")
        ->each([&](const std::string&) { seed_set = true; });

    RunCommand run_cmd;
    auto* run = app.add_subcommand("run", "run one scenario and write metrics CSV");
    run->add_option("--config", run_cmd.config_path, "scenario config (JSON)")->required();
    run->add_option("--out", run_cmd.out_dir, "output directory")->required();

    SweepCommand sweep_cmd;
    std::string m_text;
    std::string groupings_text;
    std::string allocators_text;
    auto* sweep = app.add_subcommand("sweep", "run a UE-count sweep");
    sweep->add_option("--config", sweep_cmd.config_path, "scenario config (JSON)")->required();
    sweep->add_option("--m", m_text, "comma-separated ascending UE counts")->required();
    sweep->add_option("--out", sweep_cmd.out_dir, "output directory")->required();
    sweep->add_option("--groupings", groupings_text,
                      "comma-separated grouping schemes (default: config's)");
    sweep->add_option("--allocators", allocators_text,
                      "comma-separated allocators (default: config's)");

    ExactCommand exact_cmd;
    auto* exact = app.add_subcommand("exact", "solve one allocation instance exactly");
    exact->add_option("--instance", exact_cmd.instance_path, "instance file (JSON)")->required();

    Reduce3PCommand r3p_cmd;
    auto* r3p = app.add_subcommand("reduce3p",
                                   "reduce a 3-partition instance to an allocation instance");
    r3p->add_option("--in", r3p_cmd.in_path, "3-partition instance (JSON)")->required();
    r3p->add_option("--out", r3p_cmd.out_path, "output instance file")->required();

    ReduceSatCommand rsat_cmd;
    auto* rsat = app.add_subcommand(
        "reducesat", "reduce a boolean formula to a 2-grouping instance and solve it");
    rsat->add_option("--in", rsat_cmd.in_path, "formula file (JSON)")->required();
    rsat->add_option("--out", rsat_cmd.out_path, "optional report file");

    ValidateCommand val_cmd;
    auto* val = app.add_subcommand("validate", "validate a scenario config");
    val->add_option("--config", val_cmd.config_path, "scenario config (JSON)")->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        throw UsageError(app.help(), 0);
    } catch (const CLI::ParseError& e) {
        std::ostringstream msg;
        msg << e.what() << "\n\n" << app.help();
        throw UsageError(msg.str(), e.get_exit_code() == 0 ? 2 : e.get_exit_code());
    }

    const auto parse_list = [](const std::string& text, auto&& convert) {
        std::vector<std::decay_t<decltype(convert(std::string{}))>> out;
        std::stringstream ss(text);
        std::string item;
        while (std::getline(ss, item, ',')) {
            try {
                out.push_back(convert(item));
            } catch (const std::exception& e) {
                throw UsageError(e.what(), 2);
            }
        }
        return out;
    };

    ParsedArgs parsed;
    if (seed_set) parsed.seed_override = seed;
    if (*run) {
        parsed.command = run_cmd;
    } else if (*sweep) {
        sweep_cmd.m_list = parse_m_list(m_text);
        if (!groupings_text.empty())
            sweep_cmd.groupings = parse_list(groupings_text, grouping_scheme_from_string);
        if (!allocators_text.empty())
            sweep_cmd.allocators = parse_list(allocators_text, allocator_kind_from_string);
        parsed.command = sweep_cmd;
    } else if (*exact) {
        parsed.command = exact_cmd;
    } else if (*r3p) {
        parsed.command = r3p_cmd;
    } else if (*rsat) {
        parsed.command = rsat_cmd;
    } else {
        parsed.command = val_cmd;
    }
    return parsed;
}

int dispatch(const ParsedArgs& parsed) {
    return std::visit(
        [&](const auto& cmd) -> int {
            using T = std::decay_t<decltype(cmd)>;
            if constexpr (std::is_same_v<T, RunCommand>)
                return run_run(cmd, parsed.seed_override);
            else if constexpr (std::is_same_v<T, SweepCommand>)
                return run_sweep(cmd, parsed.seed_override);
            else if constexpr (std::is_same_v<T, ExactCommand>)
                return run_exact(cmd);
            else if constexpr (std::is_same_v<T, Reduce3PCommand>)
                return run_reduce3p(cmd);
            else if constexpr (std::is_same_v<T, ReduceSatCommand>)
                return run_reducesat(cmd);
            else
                return run_validate(cmd);
        },
        parsed.command);
}

}  // namespace mcast::cli
