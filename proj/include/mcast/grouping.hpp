#pragma once

#include <array>
#include <string>
#include <vector>

#include "mcast/channel.hpp"
#include "mcast/cqi.hpp"
#include "mcast/rng.hpp"

namespace mcast {

/// A partition of the UE index set into multicast groups.  Groups are
/// ordered (best channel first for the SNR-driven schemes), nonempty,
/// pairwise disjoint, and cover all of 0..n_ues-1.
struct Grouping {
    std::vector<std::vector<int>> groups;
    std::string label;
    int n_ues = 0;

    int n_groups() const { return static_cast<int>(groups.size()); }

    /// Validates the partition invariants; throws std::invalid_argument.
    static Grouping make(std::vector<std::vector<int>> groups, std::string label, int n_ues);
};

/// Average-SNR thresholds T(c) = SNR_min(c) / ln(10/9).  A UE whose average
/// SNR sits exactly at T(c) keeps its instantaneous SNR at or above
/// SNR_min(c) with probability 0.9 under Exp(1) fading.
struct CqiThresholds {
    std::array<double, CqiTable::kLevels> t_linear{};
};

CqiThresholds cqi_thresholds(const CqiTable& table);

/// UEs sorted by average SNR descending (ties by id), chunked into groups of
/// k; the last group may be smaller.
Grouping group_fixed_size(const std::vector<AverageChannel>& avg_snrs, int k);

/// Buckets UEs by which threshold band their average SNR falls in: at or
/// above T(15) is bucket 1, [T(14), T(15)) is bucket 2, ..., below T(2) is
/// bucket 15.  Empty buckets are dropped.
Grouping group_cqi(const std::vector<AverageChannel>& avg_snrs, const CqiThresholds& thresholds);

/// Bucket index (1..15) for one average SNR.  Exposed for tests.
int cqi_bucket(double avg_snr_linear, const CqiThresholds& thresholds);

/// Each UE placed in one of n_groups buckets uniformly at random; empty
/// buckets dropped.
Grouping group_random(int n_ues, int n_groups, RngStream rng);

/// Singleton groups in id order (L = M).
Grouping group_unicast(int n_ues);

/// Collapses a per-UE rate matrix to per-group rates: row i, column j is the
/// minimum rate over the members of group i.
RateMatrix group_rate_matrix(const Grouping& grouping, const RateMatrix& ue_rates);

}  // namespace mcast
