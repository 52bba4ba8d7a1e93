#include <doctest.h>

#include <algorithm>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "../src/cli.hpp"
#include "mcast/config.hpp"
#include "mcast/harness.hpp"

using namespace mcast;

namespace {

std::string temp_dir() {
    const auto dir = std::filesystem::temp_directory_path() / "mcast_cli_tests";
    std::filesystem::create_directories(dir);
    return dir.string();
}

std::string write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    REQUIRE(out);
    out << text;
    return path;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

TEST_CASE("empty JSON object yields the defaults") {
    const ScenarioConfig cfg = parse_config("{}");
    CHECK(cfg.n_ues == 10);
    CHECK(cfg.n_prbs == 100);
    CHECK(cfg.r_req_kbps == 1000.0);
    CHECK(cfg.cell_radius_km == 0.375);
    CHECK(cfg.n_placements == 100);
    CHECK(cfg.n_subframes == 1000);
    CHECK(cfg.grouping == GroupingScheme::Cqi);
    CHECK(cfg.allocator == AllocatorKind::Lp);
    CHECK(cfg.channel.tx_power_dbm == 46.0);
    CHECK(cfg.channel.noise_density_dbm_hz == -174.0);
    CHECK(cfg.channel.noise_figure_db == 5.0);
    CHECK(cfg.channel.prb_width_hz == 180000.0);
    CHECK(cfg.channel.shadowing_sigma_db == 10.0);
    CHECK(!cfg.measure_time);
}

TEST_CASE("parse then serialize is a fixed point") {
    ScenarioConfig cfg = parse_config(R"({
        "ues": 23, "prbs": 64, "r_req_kbps": 512.5, "seed": 99,
        "grouping": {"scheme": "fixed", "fixed_size": 4},
        "allocator": {"kind": "sa", "sa_iters": 2000},
        "pf": {"unicast_ues": 3}
    })");
    const std::string once = serialize_config(cfg);
    const std::string twice = serialize_config(parse_config(once));
    CHECK(once == twice);
    CHECK(cfg.n_ues == 23);
    CHECK(cfg.grouping == GroupingScheme::Fixed);
    CHECK(cfg.allocator == AllocatorKind::Sa);
    CHECK(cfg.sa_iters == 2000);
    CHECK(cfg.pf_unicast_ues == 3);
}

TEST_CASE("cqi table override round trips and is validated") {
    std::ostringstream snr, rate;
    for (int c = 0; c < 15; ++c) {
        snr << (c ? "," : "") << (-5.0 + 2.0 * c);
        rate << (c ? "," : "") << 20.0 * (c + 1);
    }
    const std::string text = "{\"cqi_table\": {\"snr_min_db\": [" + snr.str() +
                             "], \"rate_kbps\": [" + rate.str() + "]}}";
    const ScenarioConfig cfg = parse_config(text);
    REQUIRE(cfg.cqi_table_override.has_value());
    CHECK(cfg.cqi_table().rate_kbps[0] == 20.0);
    CHECK(serialize_config(parse_config(serialize_config(cfg))) == serialize_config(cfg));

    CHECK_THROWS_AS(
        parse_config(R"({"cqi_table": {"snr_min_db": [1,2,3], "rate_kbps": [1,2,3]}})"),
        std::invalid_argument);
}

TEST_CASE("validation names the offending field") {
    CHECK_THROWS_WITH_AS(parse_config(R"({"r_req_kbps": 0})"),
                         doctest::Contains("r_req_kbps"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse_config(R"({"ues": 0})"), doctest::Contains("ues"),
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse_config(R"({"grouping": {"scheme": "best"}})"),
                         doctest::Contains("scheme"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse_config("not json"), doctest::Contains("JSON"),
                         std::invalid_argument);
}

TEST_CASE("argument parsing builds the right commands") {
    using namespace mcast::cli;

    const ParsedArgs run = parse_args({"run", "--config", "c.json", "--out", "results"});
    const auto* run_cmd = std::get_if<RunCommand>(&run.command);
    REQUIRE(run_cmd != nullptr);
    CHECK(run_cmd->config_path == "c.json");
    CHECK(run_cmd->out_dir == "results");
    CHECK(!run.seed_override.has_value());

    const ParsedArgs sweep = parse_args({"sweep", "--config", "c.json", "--m",
                                         "10,20,30", "--out", "r", "--groupings",
                                         "cqi,fixed", "--allocators", "lp,greedy",
                                         "--seed", "5"});
    const auto* sweep_cmd = std::get_if<SweepCommand>(&sweep.command);
    REQUIRE(sweep_cmd != nullptr);
    CHECK(sweep_cmd->m_list == std::vector<int>{10, 20, 30});
    CHECK(sweep_cmd->groupings ==
          std::vector<GroupingScheme>{GroupingScheme::Cqi, GroupingScheme::Fixed});
    CHECK(sweep_cmd->allocators ==
          std::vector<AllocatorKind>{AllocatorKind::Lp, AllocatorKind::Greedy});
    REQUIRE(sweep.seed_override.has_value());
    CHECK(*sweep.seed_override == 5);

    const ParsedArgs exact = parse_args({"exact", "--instance", "i.json"});
    CHECK(std::get_if<ExactCommand>(&exact.command) != nullptr);

    const ParsedArgs validate = parse_args({"validate", "--config", "c.json"});
    CHECK(std::get_if<ValidateCommand>(&validate.command) != nullptr);
}

TEST_CASE("bad command lines raise usage errors") {
    using namespace mcast::cli;
    CHECK_THROWS_AS(parse_args({}), UsageError);
    CHECK_THROWS_AS(parse_args({"frobnicate"}), UsageError);
    CHECK_THROWS_AS(parse_args({"run", "--config", "c.json"}), UsageError);  // missing --out
    CHECK_THROWS_AS(
        parse_args({"sweep", "--config", "c", "--m", "30,20", "--out", "r"}),
        UsageError);  // not ascending
    CHECK_THROWS_AS(
        parse_args({"sweep", "--config", "c", "--m", "abc", "--out", "r"}),
        UsageError);
}

TEST_CASE("run command produces deterministic outputs end to end") {
    using namespace mcast::cli;
    const std::string dir = temp_dir();
    const std::string config_path = write_file(dir + "/cfg.json", R"({
        "ues": 4, "prbs": 10, "placements": 2, "subframes": 8, "seed": 3,
        "grouping": {"scheme": "unicast"},
        "allocator": {"kind": "greedy"},
        "channel": {"tx_power_dbm": 15}
    })");

    ParsedArgs a;
    a.command = RunCommand{config_path, dir + "/out_a"};
    REQUIRE(dispatch(a) == 0);
    ParsedArgs b;
    b.command = RunCommand{config_path, dir + "/out_b"};
    REQUIRE(dispatch(b) == 0);
    CHECK(slurp(dir + "/out_a/metrics.csv") == slurp(dir + "/out_b/metrics.csv"));

    // a different seed changes the records
    ParsedArgs c;
    c.command = RunCommand{config_path, dir + "/out_c"};
    c.seed_override = 4;
    REQUIRE(dispatch(c) == 0);
    CHECK(slurp(dir + "/out_a/metrics.csv") != slurp(dir + "/out_c/metrics.csv"));
}

TEST_CASE("sweep command writes per-arm files and a summary") {
    using namespace mcast::cli;
    const std::string dir = temp_dir() + "/sweep";
    std::filesystem::remove_all(dir);
    const std::string config_path = write_file(temp_dir() + "/sweep_cfg.json", R"({
        "ues": 4, "prbs": 10, "placements": 1, "subframes": 5, "seed": 3,
        "grouping": {"scheme": "random", "random_groups": 2},
        "allocator": {"kind": "greedy"}
    })");

    ParsedArgs args;
    SweepCommand cmd;
    cmd.config_path = config_path;
    cmd.m_list = {4, 6};
    cmd.out_dir = dir;
    cmd.allocators = {AllocatorKind::Greedy, AllocatorKind::Lp};
    args.command = cmd;
    REQUIRE(dispatch(args) == 0);

    CHECK(std::filesystem::exists(dir + "/random_greedy_m4.csv"));
    CHECK(std::filesystem::exists(dir + "/random_lp_m6.csv"));
    CHECK(std::filesystem::exists(dir + "/summary.csv"));
    const std::string summary = slurp(dir + "/summary.csv");
    CHECK(std::count(summary.begin(), summary.end(), '\n') == 5);  // header + 4 arms
}

TEST_CASE("validate command checks configs and reports fields") {
    using namespace mcast::cli;
    const std::string dir = temp_dir();
    const std::string good = write_file(dir + "/good.json", R"({"ues": 3})");
    ParsedArgs ok;
    ok.command = ValidateCommand{good};
    CHECK(dispatch(ok) == 0);

    const std::string bad = write_file(dir + "/bad.json", R"({"r_req_kbps": 0})");
    ParsedArgs fail;
    fail.command = ValidateCommand{bad};
    CHECK_THROWS_WITH_AS(dispatch(fail), doctest::Contains("r_req_kbps"),
                         std::invalid_argument);
}
