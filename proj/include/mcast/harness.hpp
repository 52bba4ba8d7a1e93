#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mcast/alloc_state.hpp"
#include "mcast/config.hpp"
#include "mcast/grouping.hpp"

namespace mcast {

/// Per-subframe outcome of a scenario run.  For infeasible subframes the
/// allocation is best-effort, so used_prbs = N and unused_prbs = 0.
struct MetricsRecord {
    int placement = 0;
    int subframe = 0;
    std::string scheme;    // allocator label
    std::string grouping;  // grouping label
    int n_ues = 0;
    int n_groups = 0;
    int used_prbs = 0;
    int unused_prbs = 0;
    bool feasible = false;
    double sum_rate_kbps = 0.0;  // per-group achieved rates, summed
    double wall_time_us = 0.0;

    bool operator==(const MetricsRecord&) const = default;
};

/// Runs placements x subframes of the configured scenario.  The grouping is
/// built once per placement from average SNRs; every subframe samples fresh
/// fading, allocates and records.  Output order and contents depend only on
/// the config (wall times excepted), not on the worker count.
std::vector<MetricsRecord> run_scenario(const ScenarioConfig& config);

/// Proportional-fair step: every non-reserved PRB goes to the UE maximizing
/// instantaneous rate over smoothed throughput; the history is then updated
/// with this subframe's service.
AllocationState pf_allocate(const RateMatrix& unicast_rates,
                            std::vector<double>& throughput_history,
                            const std::vector<char>& reserved_prbs, double epsilon_kbps,
                            double window_subframes);

/// One arm of the PF comparison for one subframe.
struct PfComparisonRecord {
    int placement = 0;
    int subframe = 0;
    std::string arm;  // "lp_then_pf" or "pure_pf"
    double multicast_sum_kbps = 0.0;
    double unicast_sum_kbps = 0.0;
    bool multicast_feasible = false;
};

/// Arm A serves multicast groups with the LP allocator and unicast UEs with
/// PF on the leftover PRBs; arm B serves everyone with PF, multicast UEs
/// treated as independent unicast flows.
std::vector<PfComparisonRecord> run_pf_comparison(const ScenarioConfig& config);

void write_csv(const std::vector<MetricsRecord>& records, const std::string& path);
std::vector<MetricsRecord> read_csv(const std::string& path);
void write_pf_csv(const std::vector<PfComparisonRecord>& records, const std::string& path);

/// Rows of the sweep summary CSV: one per (m, grouping, allocator).
struct SweepSummaryRow {
    int n_ues = 0;
    std::string grouping;
    std::string scheme;
    double mean_unused_prbs = 0.0;
    double infeasible_per_1000 = 0.0;
    double mean_alloc_time_us = 0.0;
};

SweepSummaryRow summarize(const std::vector<MetricsRecord>& records);
void write_summary_csv(const std::vector<SweepSummaryRow>& rows, const std::string& path);

}  // namespace mcast
