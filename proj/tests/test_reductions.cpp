#include <doctest.h>

#include <stdexcept>

#include "mcast/reductions.hpp"
#include "support/oracles.hpp"

using namespace mcast;

TEST_CASE("3P instance validation") {
    ThreePartitionInstance ok{{3, 3, 3}, 9, 1};
    CHECK_NOTHROW(ok.validate());

    ThreePartitionInstance wrong_count{{3, 3}, 9, 1};
    CHECK_THROWS_WITH_AS(wrong_count.validate(),
                         doctest::Contains("expected P = 3m"), std::invalid_argument);

    ThreePartitionInstance bad_sum{{3, 3, 4}, 9, 1};
    CHECK_THROWS_WITH_AS(bad_sum.validate(), doctest::Contains("sum"), std::invalid_argument);

    // 2 violates 12/4 < value
    ThreePartitionInstance low{{2, 5, 5}, 12, 1};
    CHECK_THROWS_WITH_AS(low.validate(), doctest::Contains("B/4"), std::invalid_argument);

    // 6 violates value < 12/2
    ThreePartitionInstance high{{6, 3, 3}, 12, 1};
    CHECK_THROWS_WITH_AS(high.validate(), doctest::Contains("B/2"), std::invalid_argument);
}

TEST_CASE("3P reduction produces identical rows and the worked examples") {
    const ThreePartitionInstance tiny{{3, 3, 3}, 9, 1};
    const auto [rates1, req1] = reduce_3p_to_blp(tiny);
    CHECK(rates1.rows == 1);
    CHECK(rates1.cols == 3);
    CHECK(req1 == 9.0);
    for (int k = 0; k < 3; ++k) CHECK(rates1.at(0, k) == 3.0);

    const ThreePartitionInstance two{{3, 3, 4, 3, 3, 4}, 10, 2};
    const auto [rates2, req2] = reduce_3p_to_blp(two);
    CHECK(rates2.rows == 2);
    CHECK(rates2.cols == 6);
    CHECK(req2 == 10.0);
    for (int k = 0; k < 6; ++k) CHECK(rates2.at(0, k) == rates2.at(1, k));

    const ThreePartitionInstance inf{{5, 5, 5, 5, 5, 7}, 16, 2};
    CHECK_NOTHROW(inf.validate());
    CHECK(!oracles::solve_3p_bruteforce(inf).has_value());
}

TEST_CASE("solve-extract-verify round trips on the worked examples") {
    const ThreePartitionInstance tiny{{3, 3, 3}, 9, 1};
    const auto [rates1, req1] = reduce_3p_to_blp(tiny);
    const ExactResult sol1 = solve_blp_exact(rates1, req1);
    REQUIRE(sol1.status == ExactResult::Status::Feasible);
    const auto part1 = extract_3p_solution(sol1, tiny);
    REQUIRE(part1.has_value());
    CHECK(verify_3p(tiny, *part1));

    const ThreePartitionInstance two{{3, 3, 4, 3, 3, 4}, 10, 2};
    const auto [rates2, req2] = reduce_3p_to_blp(two);
    const ExactResult sol2 = solve_blp_exact(rates2, req2);
    REQUIRE(sol2.status == ExactResult::Status::Feasible);
    const auto part2 = extract_3p_solution(sol2, two);
    REQUIRE(part2.has_value());
    CHECK(verify_3p(two, *part2));
    for (const auto& cell : *part2) {
        long long sum = 0;
        for (int idx : cell) sum += two.values[idx];
        CHECK(sum == 10);
    }

    const ThreePartitionInstance inf{{5, 5, 5, 5, 5, 7}, 16, 2};
    const auto [rates3, req3] = reduce_3p_to_blp(inf);
    const ExactResult sol3 = solve_blp_exact(rates3, req3);
    CHECK(sol3.status == ExactResult::Status::Infeasible);
    CHECK(!extract_3p_solution(sol3, inf).has_value());
}

TEST_CASE("verify_3p rejects malformed partitions") {
    const ThreePartitionInstance two{{3, 3, 4, 3, 3, 4}, 10, 2};
    CHECK(verify_3p(two, {{0, 1, 2}, {3, 4, 5}}));   // 3+3+4 twice
    CHECK(!verify_3p(two, {{0, 1, 2}}));             // missing a cell
    CHECK(!verify_3p(two, {{0, 1, 2}, {0, 4, 5}}));  // reused index
    CHECK(!verify_3p(two, {{0, 1, 3}, {2, 4, 5}}));  // 3+3+3 = 9 != 10
}

TEST_CASE("formula parsing and evaluation") {
    const BooleanFormula f = BooleanFormula::parse("(and x1 (not x2))");
    CHECK(f.n_vars == 2);
    CHECK(f.evaluate({true, false}));
    CHECK(!f.evaluate({true, true}));
    CHECK(!f.evaluate({false, false}));

    const BooleanFormula g = BooleanFormula::parse("(or x1 x2 x3)");
    CHECK(g.n_vars == 3);
    CHECK(g.evaluate({false, false, true}));
    CHECK(!g.evaluate({false, false, false}));

    CHECK_THROWS_AS(BooleanFormula::parse("(xor x1 x2)"), std::invalid_argument);
    CHECK_THROWS_AS(BooleanFormula::parse("(not x1 x2)"), std::invalid_argument);
    CHECK_THROWS_AS(BooleanFormula::parse("(and x1)"), std::invalid_argument);
    CHECK_THROWS_AS(BooleanFormula::parse("x1 x2"), std::invalid_argument);
    CHECK_THROWS_AS(BooleanFormula::parse("(and x1 y2)"), std::invalid_argument);
    CHECK_THROWS_AS(BooleanFormula::parse("(and x1 x5)", 3), std::invalid_argument);
}

TEST_CASE("SAT reduction scores 3 + formula value") {
    const BooleanFormula f = BooleanFormula::parse("(and x1 (not x2))");
    const GroupingInstance2 inst = reduce_sat_to_grouping(f);
    CHECK(inst.n_ues == 2);
    CHECK(inst.f_s({0}, {1}) == 4.0);  // x1 = T, x2 = F
    CHECK(inst.f_s({0, 1}, {}) == 3.0);
    CHECK(inst.f_s({}, {0, 1}) == 3.0);

    const BooleanFormula contradiction = BooleanFormula::parse("(and x1 (not x1))");
    const GroupingInstance2 inst2 = reduce_sat_to_grouping(contradiction);
    const Grouping2Result best = solve_grouping2_bruteforce(inst2);
    CHECK(best.best_value == 3.0);

    const BooleanFormula either = BooleanFormula::parse("(or x1 x2)");
    const GroupingInstance2 inst3 = reduce_sat_to_grouping(either);
    CHECK(inst3.f_s({0, 1}, {}) == 4.0);  // empty side allowed

    CHECK_THROWS_AS(inst.f_s({0}, {0, 1}), std::invalid_argument);
    CHECK_THROWS_AS(inst.f_s({0}, {}), std::invalid_argument);
}

TEST_CASE("grouping brute force extracts assignments that check out") {
    const BooleanFormula f = BooleanFormula::parse("(and x1 (not x2))");
    const Grouping2Result r = solve_grouping2_bruteforce(reduce_sat_to_grouping(f));
    CHECK(r.best_value == 4.0);
    const auto assignment = extract_sat_assignment(f, r);
    REQUIRE(assignment.has_value());
    CHECK((*assignment)[0]);
    CHECK(!(*assignment)[1]);

    const BooleanFormula contradiction = BooleanFormula::parse("(and x1 (not x1))");
    const Grouping2Result r2 = solve_grouping2_bruteforce(reduce_sat_to_grouping(contradiction));
    CHECK(!extract_sat_assignment(contradiction, r2).has_value());

    const BooleanFormula mixed = BooleanFormula::parse("(and (or x1 x2) (not x1))");
    const Grouping2Result r3 = solve_grouping2_bruteforce(reduce_sat_to_grouping(mixed));
    const auto a3 = extract_sat_assignment(mixed, r3);
    REQUIRE(a3.has_value());
    CHECK(!(*a3)[0]);
    CHECK((*a3)[1]);
}

TEST_CASE("grouping verdict agrees with the truth table on random formulas") {
    RngStream rng(57);
    for (int trial = 0; trial < 60; ++trial) {
        const int n_vars = 1 + static_cast<int>(rng.bounded(6));
        const BooleanFormula f = oracles::random_formula(rng, n_vars);
        const auto table_answer = oracles::sat_truth_table(f);
        const Grouping2Result r = solve_grouping2_bruteforce(reduce_sat_to_grouping(f));
        const auto grouped_answer = extract_sat_assignment(f, r);
        CHECK(table_answer.has_value() == grouped_answer.has_value());
        if (grouped_answer) CHECK(f.evaluate(*grouped_answer));
    }
}

TEST_CASE("brute force size limit") {
    GroupingInstance2 inst;
    inst.n_ues = 21;
    inst.f_s = [](const std::vector<int>&, const std::vector<int>&) { return 3.0; };
    CHECK_THROWS_AS(solve_grouping2_bruteforce(inst), std::invalid_argument);
}
