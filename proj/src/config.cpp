#include "mcast/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace mcast {

using nlohmann::json;

std::string to_string(GroupingScheme scheme) {
    switch (scheme) {
        case GroupingScheme::Fixed: return "fixed";
        case GroupingScheme::Cqi: return "cqi";
        case GroupingScheme::Random: return "random";
        case GroupingScheme::Unicast: return "unicast";
    }
    return "?";
}

std::string to_string(AllocatorKind kind) {
    switch (kind) {
        case AllocatorKind::Greedy: return "greedy";
        case AllocatorKind::Lp: return "lp";
        case AllocatorKind::Sa: return "sa";
        case AllocatorKind::Exact: return "exact";
    }
    return "?";
}

GroupingScheme grouping_scheme_from_string(const std::string& s) {
    if (s == "fixed") return GroupingScheme::Fixed;
    if (s == "cqi") return GroupingScheme::Cqi;
    if (s == "random") return GroupingScheme::Random;
    if (s == "unicast") return GroupingScheme::Unicast;
    throw std::invalid_argument("grouping.scheme must be fixed|cqi|random|unicast, got '" + s +
                                "'");
}

AllocatorKind allocator_kind_from_string(const std::string& s) {
    if (s == "greedy") return AllocatorKind::Greedy;
    if (s == "lp") return AllocatorKind::Lp;
    if (s == "sa") return AllocatorKind::Sa;
    if (s == "exact") return AllocatorKind::Exact;
    throw std::invalid_argument("allocator.kind must be greedy|lp|sa|exact, got '" + s + "'");
}

namespace {

template <typename T>
void read_if(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

const CqiTable& ScenarioConfig::cqi_table() const {
    return cqi_table_override ? *cqi_table_override : default_cqi_table();
}

void ScenarioConfig::validate() const {
    if (n_ues < 1) throw std::invalid_argument("ues must be >= 1");
    if (n_prbs < 1) throw std::invalid_argument("prbs must be >= 1");
    if (!(r_req_kbps > 0.0)) throw std::invalid_argument("r_req_kbps must be > 0");
    if (!(cell_radius_km > 0.0)) throw std::invalid_argument("cell_radius_km must be > 0");
    if (fixed_group_size < 1) throw std::invalid_argument("grouping.fixed_size must be >= 1");
    if (random_groups < 1) throw std::invalid_argument("grouping.random_groups must be >= 1");
    if (sa_iters < 1) throw std::invalid_argument("allocator.sa_iters must be >= 1");
    if (exact_node_budget < 1) throw std::invalid_argument("allocator.node_budget must be >= 1");
    if (n_placements < 1) throw std::invalid_argument("placements must be >= 1");
    if (n_subframes < 1) throw std::invalid_argument("subframes must be >= 1");
    if (!(channel.prb_width_hz > 0.0)) throw std::invalid_argument("channel.prb_width_hz must be > 0");
    if (channel.shadowing_sigma_db < 0.0)
        throw std::invalid_argument("channel.shadowing_sigma_db must be >= 0");
    if (pf_unicast_ues < 0) throw std::invalid_argument("pf.unicast_ues must be >= 0");
    if (!(pf_window_subframes >= 1.0)) throw std::invalid_argument("pf.window_subframes must be >= 1");
    if (!(pf_epsilon_kbps > 0.0)) throw std::invalid_argument("pf.epsilon_kbps must be > 0");
    if (threads < 0) throw std::invalid_argument("threads must be >= 0");
    if (cqi_table_override) cqi_table_override->validate();
}

ScenarioConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
    }

    ScenarioConfig cfg;
    read_if(j, "ues", cfg.n_ues);
    read_if(j, "prbs", cfg.n_prbs);
    read_if(j, "r_req_kbps", cfg.r_req_kbps);
    read_if(j, "cell_radius_km", cfg.cell_radius_km);
    read_if(j, "placements", cfg.n_placements);
    read_if(j, "subframes", cfg.n_subframes);
    read_if(j, "seed", cfg.master_seed);
    read_if(j, "measure_time", cfg.measure_time);
    read_if(j, "threads", cfg.threads);

    if (j.contains("grouping")) {
        const json& g = j.at("grouping");
        if (g.contains("scheme")) cfg.grouping = grouping_scheme_from_string(g.at("scheme"));
        read_if(g, "fixed_size", cfg.fixed_group_size);
        read_if(g, "random_groups", cfg.random_groups);
    }
    if (j.contains("allocator")) {
        const json& a = j.at("allocator");
        if (a.contains("kind")) cfg.allocator = allocator_kind_from_string(a.at("kind"));
        read_if(a, "sa_iters", cfg.sa_iters);
        read_if(a, "node_budget", cfg.exact_node_budget);
    }
    if (j.contains("channel")) {
        const json& c = j.at("channel");
        read_if(c, "tx_power_dbm", cfg.channel.tx_power_dbm);
        read_if(c, "noise_density_dbm_hz", cfg.channel.noise_density_dbm_hz);
        read_if(c, "noise_figure_db", cfg.channel.noise_figure_db);
        read_if(c, "prb_width_hz", cfg.channel.prb_width_hz);
        read_if(c, "shadowing_sigma_db", cfg.channel.shadowing_sigma_db);
    }
    if (j.contains("cqi_table")) {
        const json& t = j.at("cqi_table");
        std::array<double, CqiTable::kLevels> snr_db{};
        std::array<double, CqiTable::kLevels> rate{};
        const auto& snr_arr = t.at("snr_min_db");
        const auto& rate_arr = t.at("rate_kbps");
        if (snr_arr.size() != CqiTable::kLevels || rate_arr.size() != CqiTable::kLevels)
            throw std::invalid_argument("cqi_table arrays must have exactly 15 entries");
        for (int c = 0; c < CqiTable::kLevels; ++c) {
            snr_db[c] = snr_arr.at(c).get<double>();
            rate[c] = rate_arr.at(c).get<double>();
        }
        cfg.cqi_table_override = CqiTable::from_db(snr_db, rate);
    }
    if (j.contains("pf")) {
        const json& p = j.at("pf");
        read_if(p, "unicast_ues", cfg.pf_unicast_ues);
        read_if(p, "window_subframes", cfg.pf_window_subframes);
        read_if(p, "epsilon_kbps", cfg.pf_epsilon_kbps);
    }
    cfg.validate();
    return cfg;
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string serialize_config(const ScenarioConfig& cfg) {
    json j;
    j["ues"] = cfg.n_ues;
    j["prbs"] = cfg.n_prbs;
    j["r_req_kbps"] = cfg.r_req_kbps;
    j["cell_radius_km"] = cfg.cell_radius_km;
    j["placements"] = cfg.n_placements;
    j["subframes"] = cfg.n_subframes;
    j["seed"] = cfg.master_seed;
    j["measure_time"] = cfg.measure_time;
    j["threads"] = cfg.threads;
    j["grouping"] = {{"scheme", to_string(cfg.grouping)},
                     {"fixed_size", cfg.fixed_group_size},
                     {"random_groups", cfg.random_groups}};
    j["allocator"] = {{"kind", to_string(cfg.allocator)},
                      {"sa_iters", cfg.sa_iters},
                      {"node_budget", cfg.exact_node_budget}};
    j["channel"] = {{"tx_power_dbm", cfg.channel.tx_power_dbm},
                    {"noise_density_dbm_hz", cfg.channel.noise_density_dbm_hz},
                    {"noise_figure_db", cfg.channel.noise_figure_db},
                    {"prb_width_hz", cfg.channel.prb_width_hz},
                    {"shadowing_sigma_db", cfg.channel.shadowing_sigma_db}};
    j["pf"] = {{"unicast_ues", cfg.pf_unicast_ues},
               {"window_subframes", cfg.pf_window_subframes},
               {"epsilon_kbps", cfg.pf_epsilon_kbps}};
    if (cfg.cqi_table_override) {
        json snr = json::array();
        json rate = json::array();
        for (int c = 0; c < CqiTable::kLevels; ++c) {
            snr.push_back(cfg.cqi_table_override->snr_min_db[c]);
            rate.push_back(cfg.cqi_table_override->rate_kbps[c]);
        }
        j["cqi_table"] = {{"snr_min_db", snr}, {"rate_kbps", rate}};
    }
    return j.dump(2) + "\n";
}

void save_config(const ScenarioConfig& cfg, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write config file: " + path);
    out << serialize_config(cfg);
}

int resolve_threads(const ScenarioConfig& cfg) {
    if (cfg.threads > 0) return cfg.threads;
    if (const char* env = std::getenv("MCASTSIM_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    return 1;
}

}  // namespace mcast
