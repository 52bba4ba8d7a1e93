#include "mcast/exact.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "mcast/lp_solver.hpp"

namespace mcast {

namespace {

class BranchAndBound {
  public:
    BranchAndBound(const RateMatrix& rates, double r_req, long long budget)
        : rates_(rates), r_req_(r_req), budget_(budget), n_groups_(rates.rows),
          n_prbs_(rates.cols), fixed_owner_(rates.cols, -1),
          banned_(static_cast<std::size_t>(rates.rows) * rates.cols, 0) {}

    ExactResult run() {
        dfs();
        ExactResult result;
        result.nodes = nodes_;
        if (out_of_budget_) {
            result.status = ExactResult::Status::BudgetExceeded;
        } else if (best_used_ < std::numeric_limits<int>::max()) {
            result.status = ExactResult::Status::Feasible;
            result.optimum_used_prbs = best_used_;
            result.witness = best_state_;
        }
        return result;
    }

  private:
    void dfs();
    void offer_incumbent(const AllocationState& state);
    AllocationState fixed_as_state() const {
        AllocationState s(n_prbs_, n_groups_);
        for (int j = 0; j < n_prbs_; ++j) s.owner[j] = fixed_owner_[j] + 1;
        return s;
    }

    const RateMatrix& rates_;
    double r_req_;
    long long budget_;
    int n_groups_;
    int n_prbs_;

    std::vector<int> fixed_owner_;  // -1 free, else group index 0..L-1
    std::vector<char> banned_;

    long long nodes_ = 0;
    bool out_of_budget_ = false;
    int best_used_ = std::numeric_limits<int>::max();
    AllocationState best_state_;
};

void BranchAndBound::offer_incumbent(const AllocationState& state) {
    const FeasibilityReport report = evaluate(state, rates_, r_req_);
    if (report.feasible() && report.used_prbs < best_used_) {
        best_used_ = report.used_prbs;
        best_state_ = state;
    }
}

void BranchAndBound::dfs() {
    if (out_of_budget_) return;
    if (++nodes_ > budget_) {
        out_of_budget_ = true;
        return;
    }

    // Reduced instance over free PRBs with residual per-group requirements.
    std::vector<int> free_prbs;
    free_prbs.reserve(n_prbs_);
    int fixed_used = 0;
    std::vector<double> residual(n_groups_, r_req_);
    for (int j = 0; j < n_prbs_; ++j) {
        if (fixed_owner_[j] < 0) {
            free_prbs.push_back(j);
        } else {
            ++fixed_used;
            residual[fixed_owner_[j]] -= rates_.at(fixed_owner_[j], j);
        }
    }
    const int n_free = static_cast<int>(free_prbs.size());

    if (n_free == 0) {
        offer_incumbent(fixed_as_state());
        return;
    }

    RateMatrix reduced(n_groups_, n_free);
    for (int i = 0; i < n_groups_; ++i)
        for (int jj = 0; jj < n_free; ++jj)
            reduced.at(i, jj) = banned_[static_cast<std::size_t>(i) * n_prbs_ + free_prbs[jj]]
                                    ? 0.0
                                    : rates_.at(i, free_prbs[jj]);

    // Per-group count bound: group i needs at least as many PRBs as the
    // fewest of its own best rates that reach the residual, conflicts
    // ignored.  This is much tighter than the LP when fractional mass can
    // ride entirely on top-rate PRBs.
    int count_bound = 0;
    {
        std::vector<double> row(n_free);
        for (int i = 0; i < n_groups_; ++i) {
            if (residual[i] <= 0.0) continue;
            for (int jj = 0; jj < n_free; ++jj) row[jj] = reduced.at(i, jj);
            std::sort(row.begin(), row.end(), std::greater<double>());
            double got = 0.0;
            int k = 0;
            while (k < n_free && got < residual[i]) got += row[k++];
            if (got < residual[i]) return;  // unsatisfiable even with every PRB
            count_bound += k;
        }
    }
    if (fixed_used + count_bound >= best_used_) return;

    const AllocationLpResult lp = solve_allocation_lp(reduced, residual);
    if (lp.status == LpStatus::Infeasible) return;
    const int bound =
        fixed_used + std::max(count_bound,
                              static_cast<int>(std::ceil(lp.objective - 1e-6)));
    if (bound >= best_used_) return;

    // Greedy completion of the reduced instance gives an incumbent early.
    {
        std::vector<double> achieved(n_groups_, 0.0);
        std::vector<char> unsat(n_groups_, 0);
        std::vector<char> is_free(n_free, 1);
        std::vector<int> pick(n_free, 0);
        int n_unsat = 0;
        for (int i = 0; i < n_groups_; ++i)
            if (residual[i] > 0.0) {
                unsat[i] = 1;
                ++n_unsat;
            }
        int n_left = n_free;
        while (n_unsat > 0 && n_left > 0) {
            int bi = -1, bj = -1;
            double br = 0.0;
            for (int i = 0; i < n_groups_; ++i) {
                if (!unsat[i]) continue;
                for (int jj = 0; jj < n_free; ++jj) {
                    if (!is_free[jj]) continue;
                    if (reduced.at(i, jj) > br) {
                        br = reduced.at(i, jj);
                        bi = i;
                        bj = jj;
                    }
                }
            }
            if (bi < 0) break;
            pick[bj] = bi + 1;
            is_free[bj] = 0;
            --n_left;
            achieved[bi] += reduced.at(bi, bj);
            if (achieved[bi] >= residual[bi]) {
                unsat[bi] = 0;
                --n_unsat;
            }
        }
        if (n_unsat == 0) {
            AllocationState full = fixed_as_state();
            for (int jj = 0; jj < n_free; ++jj)
                if (pick[jj] != 0) full.owner[free_prbs[jj]] = pick[jj];
            offer_incumbent(full);
            if (bound >= best_used_) return;
        }
    }

    // An integral relaxation optimum settles the whole subtree.
    bool integral = true;
    for (double v : lp.x)
        if (v > 1e-7 && v < 1.0 - 1e-7) {
            integral = false;
            break;
        }
    if (integral) {
        AllocationState candidate = fixed_as_state();
        for (int i = 0; i < n_groups_; ++i)
            for (int jj = 0; jj < n_free; ++jj)
                if (lp.x[static_cast<std::size_t>(i) * n_free + jj] > 0.5)
                    candidate.owner[free_prbs[jj]] = i + 1;
        const FeasibilityReport report = evaluate(candidate, rates_, r_req_);
        if (report.feasible()) {
            offer_incumbent(candidate);
            return;
        }
        // LP called it feasible but the exact check disagrees at the
        // boundary; fall through and branch.
    }

    // Branch on the fractional variable with the largest rate.
    int br_i = -1, br_jj = -1;
    double br_rate = -1.0;
    for (int i = 0; i < n_groups_; ++i) {
        for (int jj = 0; jj < n_free; ++jj) {
            const double v = lp.x[static_cast<std::size_t>(i) * n_free + jj];
            if (v > 1e-7 && v < 1.0 - 1e-7 && reduced.at(i, jj) > br_rate) {
                br_rate = reduced.at(i, jj);
                br_i = i;
                br_jj = jj;
            }
        }
    }
    if (br_i < 0) {
        for (int i = 0; i < n_groups_ && br_i < 0; ++i)
            for (int jj = 0; jj < n_free; ++jj)
                if (lp.x[static_cast<std::size_t>(i) * n_free + jj] > 1e-7 &&
                    reduced.at(i, jj) > 0.0) {
                    br_i = i;
                    br_jj = jj;
                    break;
                }
    }
    if (br_i < 0) return;

    const int j_orig = free_prbs[br_jj];
    fixed_owner_[j_orig] = br_i;
    dfs();
    fixed_owner_[j_orig] = -1;

    banned_[static_cast<std::size_t>(br_i) * n_prbs_ + j_orig] = 1;
    dfs();
    banned_[static_cast<std::size_t>(br_i) * n_prbs_ + j_orig] = 0;
}

}  // namespace

ExactResult solve_blp_exact(const RateMatrix& rates, double r_req_kbps, long long node_budget) {
    BranchAndBound bnb(rates, r_req_kbps, node_budget);
    return bnb.run();
}

RewardMaxima max_reward_bruteforce(const RateMatrix& rates, double r_req_kbps, double tie_eps,
                                   unsigned long long state_limit) {
    const int n_groups = rates.rows;
    const int n_prbs = rates.cols;
    unsigned long long n_states = 1;
    for (int j = 0; j < n_prbs; ++j) {
        n_states *= static_cast<unsigned long long>(n_groups) + 1;
        if (n_states > state_limit)
            throw std::invalid_argument("max_reward_bruteforce: state space exceeds limit");
    }

    std::vector<double> achieved(n_groups);
    std::vector<int> owner(n_prbs);

    const auto reward_of_current = [&](int unused) {
        double e = unused;
        for (int i = 0; i < n_groups; ++i) {
            const double shortfall = r_req_kbps - achieved[i];
            if (shortfall > 0.0)
                e -= shortfall;
            else
                e += 1.0;  // satisfied group
        }
        return e;
    };

    // Odometer over owner arrays with incremental per-group rate updates.
    const auto enumerate = [&](auto&& visit) {
        std::fill(achieved.begin(), achieved.end(), 0.0);
        std::fill(owner.begin(), owner.end(), 0);
        int unused = n_prbs;
        visit(reward_of_current(unused));
        for (unsigned long long s = 1; s < n_states; ++s) {
            int pos = 0;
            while (true) {
                const int old = owner[pos];
                if (old > 0) achieved[old - 1] -= rates.at(old - 1, pos);
                if (old == n_groups) {
                    owner[pos] = 0;
                    ++unused;
                    ++pos;  // carry
                } else {
                    owner[pos] = old + 1;
                    if (old == 0) --unused;
                    achieved[old] += rates.at(old, pos);
                    break;
                }
            }
            visit(reward_of_current(unused));
        }
    };

    RewardMaxima out;
    out.max_reward = -std::numeric_limits<double>::infinity();
    enumerate([&](double e) { out.max_reward = std::max(out.max_reward, e); });
    enumerate([&](double e) {
        if (e >= out.max_reward - tie_eps) {
            AllocationState s(n_prbs, n_groups);
            s.owner = owner;
            out.argmax.push_back(std::move(s));
        }
    });
    return out;
}

}  // namespace mcast
