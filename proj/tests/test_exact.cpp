#include <doctest.h>

#include <stdexcept>
#include <vector>

#include "mcast/exact.hpp"
#include "mcast/heuristics.hpp"
#include "support/oracles.hpp"

using namespace mcast;

TEST_CASE("intro example optima") {
    const ExactResult separate = solve_blp_exact(oracles::intro_separate_rates(), 1000.0);
    REQUIRE(separate.status == ExactResult::Status::Feasible);
    CHECK(separate.optimum_used_prbs == 2);
    CHECK(evaluate(separate.witness, oracles::intro_separate_rates(), 1000.0).feasible());

    const ExactResult joint = solve_blp_exact(oracles::intro_joint_rates(), 1000.0);
    REQUIRE(joint.status == ExactResult::Status::Feasible);
    CHECK(joint.optimum_used_prbs == 10);
}

TEST_CASE("two groups cannot share one PRB") {
    RateMatrix rates(2, 1);
    rates.at(0, 0) = 10.0;
    rates.at(1, 0) = 10.0;
    CHECK(solve_blp_exact(rates, 5.0).status == ExactResult::Status::Infeasible);
}

TEST_CASE("branch and bound agrees with exhaustive enumeration") {
    RngStream rng(4242);
    int feasible = 0, infeasible = 0;
    for (int trial = 0; trial < 150; ++trial) {
        const int n_groups = 1 + static_cast<int>(rng.bounded(3));
        const int n_prbs = 2 + static_cast<int>(rng.bounded(7));
        RateMatrix rates = oracles::random_table_rates(rng, n_groups, n_prbs);
        for (auto& r : rates.rates_kbps)
            if (rng.uniform() < 0.2) r = 0.0;
        const double r_req = oracles::off_lattice(300.0 + 1500.0 * rng.uniform());

        const auto truth = oracles::min_used_bruteforce(rates, r_req);
        const ExactResult result = solve_blp_exact(rates, r_req);
        if (truth) {
            ++feasible;
            REQUIRE(result.status == ExactResult::Status::Feasible);
            CHECK(result.optimum_used_prbs == *truth);
            const FeasibilityReport report = evaluate(result.witness, rates, r_req);
            CHECK(report.feasible());
            CHECK(report.used_prbs == *truth);
        } else {
            ++infeasible;
            CHECK(result.status == ExactResult::Status::Infeasible);
        }
    }
    CHECK(feasible > 40);
    CHECK(infeasible > 10);
}

TEST_CASE("node budget exhaustion is loud, not wrong") {
    RngStream rng(5);
    const RateMatrix rates = oracles::random_table_rates(rng, 3, 10);
    const ExactResult result = solve_blp_exact(rates, oracles::off_lattice(2000.0), 1);
    CHECK(result.status == ExactResult::Status::BudgetExceeded);
    CHECK(result.optimum_used_prbs == -1);
}

TEST_CASE("reward brute force on a two-PRB instance") {
    RateMatrix rates(1, 2);
    rates.at(0, 0) = 5.0;
    rates.at(0, 1) = 3.0;
    const RewardMaxima maxima = max_reward_bruteforce(rates, 4.0);
    CHECK(maxima.max_reward == doctest::Approx(2.0));  // 1 unused - 0 + 1 satisfied
    REQUIRE(maxima.argmax.size() == 1);
    CHECK(maxima.argmax[0].owner == std::vector<int>{1, 0});
}

TEST_CASE("reward brute force with all-zero rates keeps the pool") {
    RateMatrix rates(2, 4);
    const RewardMaxima maxima = max_reward_bruteforce(rates, 100.0);
    CHECK(maxima.max_reward == doctest::Approx(4.0 - 200.0));
    REQUIRE(maxima.argmax.size() == 1);
    CHECK(maxima.argmax[0].owner == std::vector<int>{0, 0, 0, 0});
}

TEST_CASE("reward maximizers are exactly the optimal feasible states") {
    RngStream rng(31415);
    int feasible = 0;
    for (int trial = 0; trial < 60; ++trial) {
        const int n_groups = 1 + static_cast<int>(rng.bounded(3));
        const int n_prbs = 3 + static_cast<int>(rng.bounded(5));
        const RateMatrix rates = oracles::random_table_rates(rng, n_groups, n_prbs);
        const double r_req = oracles::off_lattice(300.0 + 1200.0 * rng.uniform());

        const auto truth = oracles::min_used_bruteforce(rates, r_req);
        if (!truth) continue;
        ++feasible;
        const RewardMaxima maxima = max_reward_bruteforce(rates, r_req);
        REQUIRE(!maxima.argmax.empty());
        for (const auto& state : maxima.argmax) {
            const FeasibilityReport report = evaluate(state, rates, r_req);
            CHECK(report.feasible());
            CHECK(report.used_prbs == *truth);
        }
    }
    CHECK(feasible > 20);
}

TEST_CASE("state-space limit is enforced") {
    RateMatrix rates(3, 20);
    CHECK_THROWS_AS(max_reward_bruteforce(rates, 1.0), std::invalid_argument);
}
