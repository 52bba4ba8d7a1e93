#include "mcast/grouping.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mcast {

Grouping Grouping::make(std::vector<std::vector<int>> groups, std::string label, int n_ues) {
    std::vector<char> seen(n_ues, 0);
    int covered = 0;
    for (const auto& g : groups) {
        if (g.empty())
            throw std::invalid_argument("Grouping: empty group");
        for (int ue : g) {
            if (ue < 0 || ue >= n_ues)
                throw std::invalid_argument("Grouping: UE index out of range");
            if (seen[ue])
                throw std::invalid_argument("Grouping: UE appears in two groups");
            seen[ue] = 1;
            ++covered;
        }
    }
    if (covered != n_ues)
        throw std::invalid_argument("Grouping: groups do not cover all UEs");
    Grouping out;
    out.groups = std::move(groups);
    out.label = std::move(label);
    out.n_ues = n_ues;
    return out;
}

CqiThresholds cqi_thresholds(const CqiTable& table) {
    const double log_10_9 = std::log(10.0 / 9.0);
    CqiThresholds th;
    for (int c = 0; c < CqiTable::kLevels; ++c)
        th.t_linear[c] = table.snr_min_linear[c] / log_10_9;
    return th;
}

Grouping group_fixed_size(const std::vector<AverageChannel>& avg_snrs, int k) {
    if (k < 1)
        throw std::invalid_argument("group_fixed_size: k must be >= 1");
    std::vector<AverageChannel> sorted = avg_snrs;
    std::sort(sorted.begin(), sorted.end(), [](const AverageChannel& a, const AverageChannel& b) {
        if (a.avg_snr_linear != b.avg_snr_linear) return a.avg_snr_linear > b.avg_snr_linear;
        return a.ue < b.ue;
    });
    std::vector<std::vector<int>> groups;
    for (std::size_t start = 0; start < sorted.size(); start += k) {
        std::vector<int> g;
        for (std::size_t i = start; i < std::min(sorted.size(), start + k); ++i)
            g.push_back(sorted[i].ue);
        groups.push_back(std::move(g));
    }
    return Grouping::make(std::move(groups), "fixed" + std::to_string(k),
                          static_cast<int>(avg_snrs.size()));
}

int cqi_bucket(double avg_snr_linear, const CqiThresholds& thresholds) {
    // largest c with avg >= T(c); bands are half-open, lower bound inclusive
    int c_star = 0;
    for (int c = 0; c < CqiTable::kLevels; ++c) {
        if (avg_snr_linear >= thresholds.t_linear[c])
            c_star = c + 1;
        else
            break;
    }
    return c_star <= 1 ? 15 : 16 - c_star;
}

Grouping group_cqi(const std::vector<AverageChannel>& avg_snrs, const CqiThresholds& thresholds) {
    std::vector<std::vector<int>> buckets(CqiTable::kLevels);
    for (const auto& a : avg_snrs)
        buckets[cqi_bucket(a.avg_snr_linear, thresholds) - 1].push_back(a.ue);
    std::vector<std::vector<int>> groups;
    for (auto& b : buckets)
        if (!b.empty()) groups.push_back(std::move(b));
    return Grouping::make(std::move(groups), "cqi", static_cast<int>(avg_snrs.size()));
}

Grouping group_random(int n_ues, int n_groups, RngStream rng) {
    if (n_groups < 1)
        throw std::invalid_argument("group_random: n_groups must be >= 1");
    std::vector<std::vector<int>> buckets(n_groups);
    for (int u = 0; u < n_ues; ++u)
        buckets[rng.bounded(n_groups)].push_back(u);
    std::vector<std::vector<int>> groups;
    for (auto& b : buckets)
        if (!b.empty()) groups.push_back(std::move(b));
    return Grouping::make(std::move(groups), "random" + std::to_string(n_groups), n_ues);
}

Grouping group_unicast(int n_ues) {
    if (n_ues < 1)
        throw std::invalid_argument("group_unicast: n_ues must be >= 1");
    std::vector<std::vector<int>> groups(n_ues);
    for (int u = 0; u < n_ues; ++u)
        groups[u] = {u};
    return Grouping::make(std::move(groups), "unicast", n_ues);
}

RateMatrix group_rate_matrix(const Grouping& grouping, const RateMatrix& ue_rates) {
    if (grouping.n_ues != ue_rates.rows)
        throw std::invalid_argument("group_rate_matrix: grouping covers " +
                                    std::to_string(grouping.n_ues) + " UEs but matrix has " +
                                    std::to_string(ue_rates.rows) + " rows");
    RateMatrix out(grouping.n_groups(), ue_rates.cols, ue_rates.subframe);
    for (int i = 0; i < grouping.n_groups(); ++i) {
        for (int j = 0; j < ue_rates.cols; ++j) {
            double r = std::numeric_limits<double>::infinity();
            for (int ue : grouping.groups[i])
                r = std::min(r, ue_rates.at(ue, j));
            out.at(i, j) = r;
        }
    }
    return out;
}

}  // namespace mcast
