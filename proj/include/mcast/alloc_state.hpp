#pragma once

#include <vector>

#include "mcast/channel.hpp"

namespace mcast {

/// Assignment of each PRB to a group index 0..L, where group 0 is the unused
/// pool.  The owner-array representation keeps swap/drop/add O(1) and copies
/// cheap.
struct AllocationState {
    std::vector<int> owner;  // owner[j] in 0..n_groups
    int n_groups = 0;

    AllocationState() = default;
    AllocationState(int n_prbs, int n_groups_) : owner(n_prbs, 0), n_groups(n_groups_) {}

    int n_prbs() const { return static_cast<int>(owner.size()); }
    int unused_count() const;

    bool operator==(const AllocationState&) const = default;
};

/// Outcome of checking one allocation against the per-group rate requirement.
struct FeasibilityReport {
    std::vector<double> group_rates_kbps;  // l_i, length L
    std::vector<char> satisfied;           // l_i >= R
    int n_satisfied = 0;
    int used_prbs = 0;
    int unused_prbs = 0;

    bool feasible() const { return n_satisfied == static_cast<int>(satisfied.size()); }
};

/// Computes per-group achieved rates, satisfaction counts and PRB usage for
/// a state under the given group rate matrix.  Throws std::invalid_argument
/// on dimension mismatch.
FeasibilityReport evaluate(const AllocationState& state, const RateMatrix& rates,
                           double r_req_kbps);

/// Arithmetic mean of per-subframe unused-PRB counts (finite-horizon stand-in
/// for the long-run average).  Throws std::invalid_argument on empty input.
double average_unused(const std::vector<int>& per_subframe_unused);

}  // namespace mcast
