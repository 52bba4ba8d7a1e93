#include "mcast/alloc_state.hpp"

#include <numeric>
#include <stdexcept>

namespace mcast {

int AllocationState::unused_count() const {
    int n = 0;
    for (int o : owner)
        if (o == 0) ++n;
    return n;
}

FeasibilityReport evaluate(const AllocationState& state, const RateMatrix& rates,
                           double r_req_kbps) {
    if (state.n_prbs() != rates.cols || state.n_groups != rates.rows)
        throw std::invalid_argument("evaluate: state dimensions do not match rate matrix");

    FeasibilityReport report;
    report.group_rates_kbps.assign(state.n_groups, 0.0);
    for (int j = 0; j < state.n_prbs(); ++j) {
        const int o = state.owner[j];
        if (o == 0) {
            ++report.unused_prbs;
        } else {
            ++report.used_prbs;
            report.group_rates_kbps[o - 1] += rates.at(o - 1, j);
        }
    }
    report.satisfied.resize(state.n_groups);
    for (int i = 0; i < state.n_groups; ++i) {
        report.satisfied[i] = report.group_rates_kbps[i] >= r_req_kbps;
        if (report.satisfied[i]) ++report.n_satisfied;
    }
    return report;
}

double average_unused(const std::vector<int>& per_subframe_unused) {
    if (per_subframe_unused.empty())
        throw std::invalid_argument("average_unused: empty input");
    const double total =
        std::accumulate(per_subframe_unused.begin(), per_subframe_unused.end(), 0.0);
    return total / static_cast<double>(per_subframe_unused.size());
}

}  // namespace mcast
