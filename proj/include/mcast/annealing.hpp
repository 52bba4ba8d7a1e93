#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "mcast/alloc_state.hpp"
#include "mcast/channel.hpp"
#include "mcast/rng.hpp"

namespace mcast {

/// One DTMC move over allocation states.  Swap exchanges the owners of two
/// PRBs (the unused pool counts as a group on either side), Drop returns an
/// assigned PRB to the pool, Add hands a pooled PRB to a group.
struct ActionKind {
    enum class Type { Swap, Drop, Add, Stay };
    Type type = Type::Stay;
    int j1 = -1;
    int j2 = -1;
    int i1 = -1;  // target group for Add, 1..L
};

/// Per-state probabilities of picking each action class; the remainder is an
/// explicit self-loop.
struct ActionProbabilities {
    double swap = 0.0;
    double drop = 0.0;
    double add = 0.0;
    double stay = 0.0;
};

struct AnnealParams {
    std::uint64_t max_iter = 100000;
    // Cooling schedule: iteration (1-based) -> temperature.  The default
    // 1/ln(k+1) stays finite at k = 1.
    std::function<double(std::uint64_t)> temperature_fn;
    RngStream rng;
};

double default_temperature(std::uint64_t iteration);

struct AnnealOutcome {
    AllocationState best_state;
    double best_reward = 0.0;
    std::vector<double> best_reward_trace;  // one entry per iteration
};

/// Reward E(s) = |unused pool| - sum_i [R - l_i]^+ + |satisfied groups|,
/// in kbps units.
double reward(const AllocationState& state, const RateMatrix& rates, double r_req_kbps);

/// Action-class probabilities for the current state; components are
/// nonnegative and sum to 1.
ActionProbabilities action_probabilities(const AllocationState& state);

/// Draws an action class and a uniformly random move of that class, and
/// returns the resulting state.  A swap inside one group returns the state
/// unchanged (still reported as a Swap).
std::pair<AllocationState, ActionKind> propose(const AllocationState& state, RngStream& rng);

/// Metropolis acceptance: always accepts an equal-or-better reward,
/// otherwise accepts with probability exp((e_proposed - e_current)/T).
bool accept(double e_current, double e_proposed, double temperature, RngStream& rng);

/// One-step transition probability p(s_d -> s_d') of the chain at fixed
/// temperature; zero for non-neighbors and for d = d'.  Used by the
/// detailed-balance tests, never to materialize the full matrix.
double transition_probability(const AllocationState& from, const AllocationState& to,
                              const RateMatrix& rates, double r_req_kbps, double temperature);

/// Same quantity in extended precision; the detailed-balance checks multiply
/// it with e^{E/T} factors whose doubles would underflow.
long double transition_probability_ld(const AllocationState& from, const AllocationState& to,
                                      const RateMatrix& rates, double r_req_kbps,
                                      double temperature);

/// Runs the chain from the all-unused state and returns the best state ever
/// visited plus the per-iteration best-reward trace.
AnnealOutcome anneal(const RateMatrix& rates, double r_req_kbps, const AnnealParams& params);

}  // namespace mcast
