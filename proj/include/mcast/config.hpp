#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "mcast/channel.hpp"
#include "mcast/cqi.hpp"

namespace mcast {

enum class GroupingScheme { Fixed, Cqi, Random, Unicast };
enum class AllocatorKind { Greedy, Lp, Sa, Exact };

std::string to_string(GroupingScheme scheme);
std::string to_string(AllocatorKind kind);
GroupingScheme grouping_scheme_from_string(const std::string& name);
AllocatorKind allocator_kind_from_string(const std::string& name);

/// Everything a scenario run needs: population, channel constants, grouping
/// and allocator selection, horizon, and seeding.
struct ScenarioConfig {
    int n_ues = 10;
    int n_prbs = 100;
    double r_req_kbps = 1000.0;
    double cell_radius_km = 0.375;

    GroupingScheme grouping = GroupingScheme::Cqi;
    int fixed_group_size = 5;
    int random_groups = 10;

    AllocatorKind allocator = AllocatorKind::Lp;
    std::uint64_t sa_iters = 100000;
    long long exact_node_budget = 10'000'000;

    int n_placements = 100;
    int n_subframes = 1000;
    std::uint64_t master_seed = 1;

    ChannelParams channel;
    std::optional<CqiTable> cqi_table_override;

    // Proportional-fair baseline knobs.
    int pf_unicast_ues = 0;
    double pf_window_subframes = 100.0;
    double pf_epsilon_kbps = 1.0;

    // Wall-time measurement makes the CSV non-reproducible across runs, so
    // it is opt-in.
    bool measure_time = false;
    int threads = 0;  // 0 = MCASTSIM_THREADS env var, else 1

    const CqiTable& cqi_table() const;

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;
};

ScenarioConfig load_config(const std::string& path);
ScenarioConfig parse_config(const std::string& json_text);
std::string serialize_config(const ScenarioConfig& config);
void save_config(const ScenarioConfig& config, const std::string& path);

/// Resolved worker count for a config (config value, then environment, then 1).
int resolve_threads(const ScenarioConfig& config);

}  // namespace mcast
