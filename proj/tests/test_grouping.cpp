#include <doctest.h>

#include <stdexcept>
#include <vector>

#include <cmath>
#include <set>

#include "mcast/grouping.hpp"
#include "support/oracles.hpp"

using namespace mcast;

namespace {

void check_partition(const Grouping& g) {
    std::set<int> seen;
    for (const auto& group : g.groups) {
        CHECK(!group.empty());
        for (int ue : group) {
            CHECK(ue >= 0);
            CHECK(ue < g.n_ues);
            CHECK(seen.insert(ue).second);
        }
    }
    CHECK(static_cast<int>(seen.size()) == g.n_ues);
    CHECK(g.n_groups() >= 1);
    CHECK(g.n_groups() <= g.n_ues);
}

std::vector<AverageChannel> avgs_from(const std::vector<double>& values) {
    std::vector<AverageChannel> out;
    for (std::size_t u = 0; u < values.size(); ++u)
        out.push_back({static_cast<int>(u), values[u]});
    return out;
}

}  // namespace

TEST_CASE("thresholds are SNR_min scaled by 1/ln(10/9)") {
    CqiTable t = default_cqi_table();
    t.snr_min_linear[0] = 1.0;  // engineered value for the check
    const CqiThresholds th = cqi_thresholds(t);
    CHECK(th.t_linear[0] == doctest::Approx(9.4912).epsilon(1e-4));

    CqiTable doubled = t;
    for (auto& s : doubled.snr_min_linear) s *= 2.0;
    const CqiThresholds th2 = cqi_thresholds(doubled);
    for (int c = 0; c < 15; ++c)
        CHECK(th2.t_linear[c] == doctest::Approx(2.0 * th.t_linear[c]));

    const CqiThresholds def = cqi_thresholds(default_cqi_table());
    for (int c = 0; c < 15; ++c)
        CHECK(std::exp(-default_cqi_table().snr_min_linear[c] / def.t_linear[c]) ==
              doctest::Approx(0.9).epsilon(1e-12));
}

TEST_CASE("fixed-size grouping chunks by descending average SNR") {
    const auto one = group_fixed_size(avgs_from({1.0, 2.0, 3.0, 4.0, 5.0}), 5);
    CHECK(one.n_groups() == 1);
    check_partition(one);

    const auto g = group_fixed_size(avgs_from({10, 70, 20, 60, 30, 50, 40}), 3);
    REQUIRE(g.n_groups() == 3);
    CHECK(g.groups[0].size() == 3);
    CHECK(g.groups[1].size() == 3);
    CHECK(g.groups[2].size() == 1);
    CHECK(g.groups[0] == std::vector<int>{1, 3, 5});  // 70, 60, 50
    check_partition(g);

    // paper default: 10 UEs at size 5 -> 2 groups
    const auto two = group_fixed_size(avgs_from({1, 2, 3, 4, 5, 6, 7, 8, 9, 10}), 5);
    CHECK(two.n_groups() == 2);

    // ties broken by id
    const auto tied = group_fixed_size(avgs_from({5, 5, 5, 5}), 2);
    CHECK(tied.groups[0] == std::vector<int>{0, 1});
    CHECK(tied.groups[1] == std::vector<int>{2, 3});
}

TEST_CASE("fixed-size group boundaries are SNR-sorted") {
    RngStream rng(5);
    std::vector<double> values;
    for (int u = 0; u < 23; ++u) values.push_back(rng.uniform() * 100.0);
    const auto avgs = avgs_from(values);
    const auto g = group_fixed_size(avgs, 4);
    check_partition(g);
    for (int i = 0; i + 1 < g.n_groups(); ++i) {
        double min_here = 1e300, max_next = -1e300;
        for (int ue : g.groups[i]) min_here = std::min(min_here, values[ue]);
        for (int ue : g.groups[i + 1]) max_next = std::max(max_next, values[ue]);
        CHECK(min_here >= max_next);
    }
}

TEST_CASE("cqi bucket rule") {
    const CqiThresholds th = cqi_thresholds(default_cqi_table());

    CHECK(cqi_bucket(th.t_linear[14], th) == 1);       // at T(15), inclusive
    CHECK(cqi_bucket(th.t_linear[14] * 2.0, th) == 1);
    CHECK(cqi_bucket(th.t_linear[13], th) == 2);       // exactly T(14)
    CHECK(cqi_bucket(th.t_linear[1] * 0.5, th) == 15);  // below T(2)
    CHECK(cqi_bucket(th.t_linear[0] * 0.5, th) == 15);  // below T(1) too

    // raising the average SNR never worsens the bucket
    RngStream rng(9);
    for (int trial = 0; trial < 500; ++trial) {
        const double lo = th.t_linear[0] * std::pow(10.0, 3.0 * rng.uniform());
        const double hi = lo * (1.0 + rng.uniform());
        CHECK(cqi_bucket(hi, th) <= cqi_bucket(lo, th));
    }
}

TEST_CASE("cqi grouping drops empty buckets and keeps best-first order") {
    const CqiThresholds th = cqi_thresholds(default_cqi_table());

    const auto single = group_cqi(avgs_from({th.t_linear[14] * 2, th.t_linear[14] + 1}), th);
    CHECK(single.n_groups() == 1);

    const double mid_7_8 = 0.5 * (th.t_linear[6] + th.t_linear[7]);
    const auto g =
        group_cqi(avgs_from({th.t_linear[14] + 1.0, mid_7_8, th.t_linear[1] / 2.0}), th);
    REQUIRE(g.n_groups() == 3);
    CHECK(g.groups[0] == std::vector<int>{0});  // bucket 1
    CHECK(g.groups[1] == std::vector<int>{1});  // interior bucket (16 - 7 = 9)
    CHECK(g.groups[2] == std::vector<int>{2});  // bucket 15
    check_partition(g);

    // all UEs in one group share a bucket index
    RngStream rng(31);
    std::vector<double> values;
    for (int u = 0; u < 40; ++u)
        values.push_back(th.t_linear[0] * std::pow(10.0, 4.0 * rng.uniform() - 1.0));
    const auto many = group_cqi(avgs_from(values), th);
    check_partition(many);
    for (const auto& group : many.groups) {
        const int bucket = cqi_bucket(values[group[0]], th);
        for (int ue : group) CHECK(cqi_bucket(values[ue], th) == bucket);
    }
}

TEST_CASE("random grouping is uniform and seeded") {
    const auto one = group_random(6, 1, RngStream(2));
    CHECK(one.n_groups() == 1);

    const auto a = group_random(50, 10, RngStream(3));
    const auto b = group_random(50, 10, RngStream(3));
    CHECK(a.groups == b.groups);
    check_partition(a);

    const auto big = group_random(10000, 10, RngStream(4));
    check_partition(big);
    const double sigma = std::sqrt(10000 * 0.1 * 0.9);
    for (const auto& group : big.groups) {
        CHECK(group.size() > 1000 - 3 * sigma);
        CHECK(group.size() < 1000 + 3 * sigma);
    }
}

TEST_CASE("unicast grouping is singletons in id order") {
    const auto one = group_unicast(1);
    REQUIRE(one.n_groups() == 1);
    CHECK(one.groups[0] == std::vector<int>{0});

    const auto three = group_unicast(3);
    REQUIRE(three.n_groups() == 3);
    CHECK(three.groups[1] == std::vector<int>{1});

    for (int m : {2, 5, 17}) CHECK(group_unicast(m).n_groups() == m);
}

TEST_CASE("partition validation rejects broken groupings") {
    CHECK_THROWS_AS(Grouping::make({{0, 1}, {1, 2}}, "x", 3), std::invalid_argument);
    CHECK_THROWS_AS(Grouping::make({{0, 1}}, "x", 3), std::invalid_argument);
    CHECK_THROWS_AS(Grouping::make({{0}, {}}, "x", 1), std::invalid_argument);
    CHECK_THROWS_AS(Grouping::make({{0, 3}}, "x", 2), std::invalid_argument);
}

TEST_CASE("group rate matrix takes the row-wise minimum over members") {
    // unicast identity
    RngStream rng(6);
    const RateMatrix ue_rates = oracles::random_table_rates(rng, 5, 12);
    const RateMatrix same = group_rate_matrix(group_unicast(5), ue_rates);
    CHECK(same.rates_kbps == ue_rates.rates_kbps);

    // intro example: joint grouping caps every PRB at 100
    const RateMatrix intro = oracles::intro_separate_rates();
    const Grouping joint = Grouping::make({{0, 1}}, "joint", 2);
    const RateMatrix collapsed = group_rate_matrix(joint, intro);
    for (double r : collapsed.rates_kbps) CHECK(r == 100.0);

    // an all-zero member zeroes the group's row
    RateMatrix with_zero = ue_rates;
    for (int j = 0; j < with_zero.cols; ++j) with_zero.at(2, j) = 0.0;
    const Grouping pair = Grouping::make({{1, 2}, {0}, {3}, {4}}, "g", 5);
    const RateMatrix out = group_rate_matrix(pair, with_zero);
    for (int j = 0; j < out.cols; ++j) CHECK(out.at(0, j) == 0.0);

    CHECK_THROWS_AS(group_rate_matrix(group_unicast(4), ue_rates), std::invalid_argument);
}

TEST_CASE("removing a member never lowers the group row") {
    RngStream rng(8);
    const RateMatrix ue_rates = oracles::random_table_rates(rng, 6, 15);
    const Grouping full = Grouping::make({{0, 1, 2, 3}, {4, 5}}, "g", 6);
    const Grouping smaller = Grouping::make({{0, 1, 2}, {3}, {4, 5}}, "g", 6);
    const RateMatrix a = group_rate_matrix(full, ue_rates);
    const RateMatrix b = group_rate_matrix(smaller, ue_rates);
    for (int j = 0; j < a.cols; ++j) CHECK(b.at(0, j) >= a.at(0, j));
}
