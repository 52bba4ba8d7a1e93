#pragma once

#include <vector>

#include "mcast/alloc_state.hpp"
#include "mcast/channel.hpp"

namespace mcast {

/// Ground-truth answer for the binary allocation problem.
struct ExactResult {
    enum class Status { Feasible, Infeasible, BudgetExceeded };

    Status status = Status::Infeasible;
    int optimum_used_prbs = -1;
    AllocationState witness;
    long long nodes = 0;
};

/// Branch-and-bound on the binary variables with the LP relaxation as lower
/// bound and greedy completions as incumbents.  Intended for small instances
/// (the search is exact, not fast).  Exceeding the node budget yields
/// Status::BudgetExceeded, never a wrong optimum.
ExactResult solve_blp_exact(const RateMatrix& rates, double r_req_kbps,
                            long long node_budget = 10'000'000);

/// Exact maximum of the reward E(s) = unused - sum of shortfalls + satisfied
/// count over all (L+1)^N states, with every maximizer returned.  States
/// within tie_eps of the maximum count as ties (rate sums are floating
/// point).  Throws std::invalid_argument when the state space exceeds
/// state_limit.
struct RewardMaxima {
    double max_reward = 0.0;
    std::vector<AllocationState> argmax;
};

RewardMaxima max_reward_bruteforce(const RateMatrix& rates, double r_req_kbps,
                                   double tie_eps = 1e-6,
                                   unsigned long long state_limit = 10'000'000);

}  // namespace mcast
