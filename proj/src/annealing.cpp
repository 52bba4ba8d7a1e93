#include "mcast/annealing.hpp"

#include <cmath>
#include <stdexcept>

namespace mcast {

namespace {

double reward_with_scratch(const AllocationState& state, const RateMatrix& rates,
                           double r_req_kbps, std::vector<double>& achieved) {
    achieved.assign(state.n_groups, 0.0);
    int unused = 0;
    for (int j = 0; j < state.n_prbs(); ++j) {
        const int o = state.owner[j];
        if (o == 0)
            ++unused;
        else
            achieved[o - 1] += rates.at(o - 1, j);
    }
    double e = unused;
    for (int i = 0; i < state.n_groups; ++i) {
        const double shortfall = r_req_kbps - achieved[i];
        if (shortfall > 0.0)
            e -= shortfall;
        else
            e += 1.0;
    }
    return e;
}

}  // namespace

double default_temperature(std::uint64_t iteration) {
    return 1.0 / std::log(static_cast<double>(iteration) + 1.0);
}

double reward(const AllocationState& state, const RateMatrix& rates, double r_req_kbps) {
    if (state.n_prbs() != rates.cols || state.n_groups != rates.rows)
        throw std::invalid_argument("reward: state dimensions do not match rate matrix");
    std::vector<double> scratch;
    return reward_with_scratch(state, rates, r_req_kbps, scratch);
}

ActionProbabilities action_probabilities(const AllocationState& state) {
    const double n = state.n_prbs();
    const double l = state.n_groups;
    const double v0 = state.unused_count();

    ActionProbabilities p;
    p.swap = 1.0 / 3.0;
    p.drop = (2.0 / 3.0) * (n - v0) / (l * (v0 + 1.0) + (n - (v0 + 1.0)));
    p.add = v0 > 0.0 ? (2.0 / 3.0) * l * v0 / (l * v0 + (n - v0)) : 0.0;
    p.stay = 1.0 - p.swap - p.drop - p.add;
    if (p.stay < 0.0) p.stay = 0.0;  // guard against rounding
    return p;
}

std::pair<AllocationState, ActionKind> propose(const AllocationState& state, RngStream& rng) {
    const int n = state.n_prbs();
    const ActionProbabilities beta = action_probabilities(state);
    const double u = rng.uniform();

    AllocationState next = state;
    ActionKind action;

    if (u < beta.swap) {
        // Ordered pair without replacement; with a single PRB no swap exists
        // and the step degenerates to a self-loop.
        if (n < 2) return {next, action};
        action.type = ActionKind::Type::Swap;
        action.j1 = static_cast<int>(rng.bounded(n));
        action.j2 = static_cast<int>(rng.bounded(n - 1));
        if (action.j2 >= action.j1) ++action.j2;
        std::swap(next.owner[action.j1], next.owner[action.j2]);
    } else if (u < beta.swap + beta.drop) {
        // Uniform over assigned PRBs; beta.drop > 0 guarantees one exists.
        const int v0 = state.unused_count();
        int k = static_cast<int>(rng.bounded(n - v0));
        for (int j = 0; j < n; ++j) {
            if (state.owner[j] == 0) continue;
            if (k-- == 0) {
                action.type = ActionKind::Type::Drop;
                action.j1 = j;
                next.owner[j] = 0;
                break;
            }
        }
    } else if (u < beta.swap + beta.drop + beta.add) {
        const int v0 = state.unused_count();
        action.type = ActionKind::Type::Add;
        action.i1 = static_cast<int>(rng.bounded(state.n_groups)) + 1;
        int k = static_cast<int>(rng.bounded(v0));
        for (int j = 0; j < n; ++j) {
            if (state.owner[j] != 0) continue;
            if (k-- == 0) {
                action.j1 = j;
                next.owner[j] = action.i1;
                break;
            }
        }
    }
    return {next, action};
}

bool accept(double e_current, double e_proposed, double temperature, RngStream& rng) {
    if (e_proposed >= e_current) return true;
    return rng.uniform() < std::exp((e_proposed - e_current) / temperature);
}

namespace {

long double transition_probability_impl(const AllocationState& from, const AllocationState& to,
                                        const RateMatrix& rates, double r_req_kbps,
                                        double temperature) {
    if (from.n_prbs() != to.n_prbs() || from.n_groups != to.n_groups)
        throw std::invalid_argument("transition_probability: mismatched state shapes");
    const int n = from.n_prbs();
    const double l = from.n_groups;

    // Classify the move from the owner-array difference.
    int d1 = -1, d2 = -1, n_diff = 0;
    for (int j = 0; j < n; ++j) {
        if (from.owner[j] == to.owner[j]) continue;
        if (n_diff == 0)
            d1 = j;
        else if (n_diff == 1)
            d2 = j;
        ++n_diff;
    }
    if (n_diff == 0 || n_diff > 2) return 0.0L;

    const ActionProbabilities beta = action_probabilities(from);
    const double v0 = from.unused_count();
    long double proposal = 0.0L;

    if (n_diff == 2) {
        // Must be a transposition of two PRBs' owners.
        const bool transposition =
            from.owner[d1] == to.owner[d2] && from.owner[d2] == to.owner[d1];
        if (!transposition || n < 2) return 0.0L;
        // Both ordered pairs (d1, d2) and (d2, d1) realize this neighbor.
        proposal = static_cast<long double>(beta.swap) * 2.0L /
                   (static_cast<long double>(n) * (n - 1));
    } else {
        const int before = from.owner[d1];
        const int after = to.owner[d1];
        if (before != 0 && after == 0) {
            proposal = static_cast<long double>(beta.drop) / (n - v0);
        } else if (before == 0 && after != 0) {
            proposal = static_cast<long double>(beta.add) / (v0 * l);
        } else {
            return 0.0L;  // direct group-to-group move is not a single action
        }
    }

    const double e_from = reward(from, rates, r_req_kbps);
    const double e_to = reward(to, rates, r_req_kbps);
    const long double alpha =
        e_to >= e_from
            ? 1.0L
            : expl(static_cast<long double>(e_to - e_from) / temperature);
    return proposal * alpha;
}

}  // namespace

long double transition_probability_ld(const AllocationState& from, const AllocationState& to,
                                      const RateMatrix& rates, double r_req_kbps,
                                      double temperature) {
    return transition_probability_impl(from, to, rates, r_req_kbps, temperature);
}

double transition_probability(const AllocationState& from, const AllocationState& to,
                              const RateMatrix& rates, double r_req_kbps, double temperature) {
    return static_cast<double>(
        transition_probability_impl(from, to, rates, r_req_kbps, temperature));
}

AnnealOutcome anneal(const RateMatrix& rates, double r_req_kbps, const AnnealParams& params) {
    if (params.max_iter < 1)
        throw std::invalid_argument("anneal: max_iter must be >= 1");
    const auto temperature =
        params.temperature_fn ? params.temperature_fn : default_temperature;

    RngStream rng = params.rng;
    AllocationState current(rates.cols, rates.rows);  // all PRBs unused
    std::vector<double> scratch;
    double e_current = reward_with_scratch(current, rates, r_req_kbps, scratch);

    AnnealOutcome out;
    out.best_state = current;
    out.best_reward = e_current;
    out.best_reward_trace.reserve(params.max_iter);

    for (std::uint64_t k = 1; k <= params.max_iter; ++k) {
        const double t = temperature(k);
        if (!(t > 0.0)) throw std::invalid_argument("anneal: temperature must stay positive");

        auto [proposed, action] = propose(current, rng);
        if (action.type != ActionKind::Type::Stay && !(proposed == current)) {
            const double e_proposed = reward_with_scratch(proposed, rates, r_req_kbps, scratch);
            if (accept(e_current, e_proposed, t, rng)) {
                current = std::move(proposed);
                e_current = e_proposed;
                if (e_current > out.best_reward) {
                    out.best_reward = e_current;
                    out.best_state = current;
                }
            }
        }
        out.best_reward_trace.push_back(out.best_reward);
    }
    return out;
}

}  // namespace mcast
