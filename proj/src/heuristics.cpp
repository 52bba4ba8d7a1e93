#include "mcast/heuristics.hpp"

#include <cmath>

namespace mcast {

namespace {

struct GreedyLoopState {
    AllocationState state;
    std::vector<char> unsat;
    std::vector<char> free_prb;
    std::vector<double> achieved;
    int n_unsat = 0;
    int n_free = 0;

    GreedyLoopState(int n_prbs, int n_groups, double r_req)
        : state(n_prbs, n_groups), unsat(n_groups, 1), free_prb(n_prbs, 1),
          achieved(n_groups, 0.0), n_free(n_prbs) {
        for (int i = 0; i < n_groups; ++i) {
            if (0.0 >= r_req) unsat[i] = 0;
            if (unsat[i]) ++n_unsat;
        }
    }

    void assign(int i, int j, const RateMatrix& rates, double r_req) {
        state.owner[j] = i + 1;
        free_prb[j] = 0;
        --n_free;
        achieved[i] += rates.at(i, j);
        if (achieved[i] >= r_req) {
            unsat[i] = 0;
            --n_unsat;
        }
    }
};

// argmax of key(i, j) over unsatisfied groups x free PRBs, restricted to
// key > 0; ascending scan keeps the smallest (group, prb) among ties.
template <typename Key>
std::pair<int, int> best_pair(const GreedyLoopState& loop, Key&& key) {
    int best_i = -1, best_j = -1;
    double best = 0.0;
    const int n_groups = static_cast<int>(loop.unsat.size());
    const int n_prbs = static_cast<int>(loop.free_prb.size());
    for (int i = 0; i < n_groups; ++i) {
        if (!loop.unsat[i]) continue;
        for (int j = 0; j < n_prbs; ++j) {
            if (!loop.free_prb[j]) continue;
            const double v = key(i, j);
            if (v > best) {
                best = v;
                best_i = i;
                best_j = j;
            }
        }
    }
    return {best_i, best_j};
}

}  // namespace

std::optional<AllocationState> allocate_greedy(const RateMatrix& rates, double r_req_kbps) {
    GreedyLoopState loop(rates.cols, rates.rows, r_req_kbps);
    while (loop.n_free > 0 && loop.n_unsat > 0) {
        const auto [i, j] = best_pair(loop, [&](int gi, int pj) { return rates.at(gi, pj); });
        if (i < 0) break;  // only zero rates remain for the unsatisfied groups
        loop.assign(i, j, rates, r_req_kbps);
    }
    if (loop.n_unsat > 0) return std::nullopt;
    return loop.state;
}

std::optional<FractionalSolution> solve_lp_relaxation(const RateMatrix& rates,
                                                      double r_req_kbps) {
    AllocationLpResult lp = solve_allocation_lp(rates, r_req_kbps);
    if (lp.status == LpStatus::Infeasible) return std::nullopt;
    FractionalSolution frac;
    frac.n_groups = rates.rows;
    frac.n_prbs = rates.cols;
    frac.x_tilde = std::move(lp.x);
    frac.objective = lp.objective;
    return frac;
}

std::optional<AllocationState> round_lp(const FractionalSolution& frac, const RateMatrix& rates,
                                        double r_req_kbps, std::vector<RoundStep>* trace) {
    if (frac.n_groups != rates.rows || frac.n_prbs != rates.cols)
        throw std::invalid_argument("round_lp: fractional solution does not match rate matrix");

    GreedyLoopState loop(rates.cols, rates.rows, r_req_kbps);
    while (loop.n_free > 0 && loop.n_unsat > 0) {
        auto [i, j] = best_pair(loop, [&](int gi, int pj) { return frac.at(gi, pj); });
        bool fallback = false;
        if (i < 0) {
            // No positive x_tilde left for any unsatisfied group; assign the
            // best remaining rate instead of wasting the PRBs.
            const auto [fi, fj] = best_pair(loop, [&](int gi, int pj) { return rates.at(gi, pj); });
            i = fi;
            j = fj;
            fallback = true;
            if (i < 0) break;
        }
        if (trace) trace->push_back({i, j, fallback});
        loop.assign(i, j, rates, r_req_kbps);
    }
    if (loop.n_unsat > 0) return std::nullopt;
    return loop.state;
}

}  // namespace mcast
