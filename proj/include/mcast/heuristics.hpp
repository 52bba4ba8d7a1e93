#pragma once

#include <optional>
#include <vector>

#include "mcast/alloc_state.hpp"
#include "mcast/channel.hpp"
#include "mcast/lp_solver.hpp"

namespace mcast {

/// Optimal solution of the relaxed allocation problem with x_ij in [0, 1].
struct FractionalSolution {
    int n_groups = 0;
    int n_prbs = 0;
    std::vector<double> x_tilde;  // L x N row-major
    double objective = 0.0;

    double at(int i, int j) const { return x_tilde[static_cast<std::size_t>(i) * n_prbs + j]; }
};

/// One pick made by the rounding loop; kept for tests that audit the
/// zero-x-tilde fallback rule.
struct RoundStep {
    int group = 0;
    int prb = 0;
    bool fallback = false;  // picked by rate because no positive x_tilde remained
};

/// Greedy allocation: repeatedly give the unassigned PRB with the highest
/// rate to the unsatisfied group that achieves it (ties: smallest group,
/// then smallest PRB; zero-rate pairs are skipped).  Returns std::nullopt
/// when the PRBs run out, or only zero rates remain, while some group is
/// still unsatisfied.
std::optional<AllocationState> allocate_greedy(const RateMatrix& rates, double r_req_kbps);

/// LP relaxation of the allocation problem.  std::nullopt means the LP (and
/// hence the binary problem) is infeasible.  Throws LpSolverError on
/// numerical failure.
std::optional<FractionalSolution> solve_lp_relaxation(const RateMatrix& rates,
                                                      double r_req_kbps);

/// Rounds a fractional solution with the same greedy loop, ranking pairs by
/// x_tilde instead of rate.  When an unsatisfied group has no positive
/// x_tilde left on free PRBs the pick falls back to the largest rate.
std::optional<AllocationState> round_lp(const FractionalSolution& frac, const RateMatrix& rates,
                                        double r_req_kbps, std::vector<RoundStep>* trace = nullptr);

}  // namespace mcast
