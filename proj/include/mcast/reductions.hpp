#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mcast/channel.hpp"
#include "mcast/exact.hpp"

namespace mcast {

/// 3-partition input: P = 3m positive integers summing to m*B, each strictly
/// between B/4 and B/2.
struct ThreePartitionInstance {
    std::vector<long long> values;
    long long bound = 0;  // B
    int m = 0;

    /// Throws std::invalid_argument naming the violated condition.
    void validate() const;
};

/// A candidate solution: m index-triples into values.
using TriplePartition = std::vector<std::array<int, 3>>;

/// Builds the equivalent allocation instance: m groups, P PRBs, requirement
/// B, and every group sees the same rate row (rho_1, ..., rho_P).
std::pair<RateMatrix, double> reduce_3p_to_blp(const ThreePartitionInstance& inst);

/// Reads the triples back out of a feasible exact solution; passes
/// infeasibility through as std::nullopt.  The triple-size and sum
/// properties are asserted on the way out.
std::optional<TriplePartition> extract_3p_solution(const ExactResult& solution,
                                                   const ThreePartitionInstance& inst);

/// True iff the triples disjointly cover all indices, each has size 3, and
/// each sums to B.
bool verify_3p(const ThreePartitionInstance& inst, const TriplePartition& partition);

/// Boolean expression tree over AND / OR / NOT / variables, parsed from
/// prefix notation such as "(and x1 (not x2))".
struct BooleanFormula {
    struct Node {
        enum class Kind { Var, Not, And, Or };
        Kind kind = Kind::Var;
        int var = -1;            // Kind::Var, 0-based
        std::vector<int> kids;   // indices into nodes
    };

    int n_vars = 0;
    std::vector<Node> nodes;
    int root = -1;

    bool evaluate(const std::vector<bool>& assignment) const;

    /// Throws std::invalid_argument on malformed input.  n_vars defaults to
    /// the largest variable index mentioned.
    static BooleanFormula parse(std::string_view text, int n_vars = -1);
};

/// Two-group grouping instance whose score is 3 plus the formula value under
/// "UE in group 1 means variable true".  Queries must partition 0..n_ues-1;
/// either side may be empty.
struct GroupingInstance2 {
    int n_ues = 0;
    std::function<double(const std::vector<int>&, const std::vector<int>&)> f_s;
};

GroupingInstance2 reduce_sat_to_grouping(const BooleanFormula& formula);

struct Grouping2Result {
    double best_value = 0.0;
    std::vector<int> g1;
    std::vector<int> g2;
};

/// Exhaustive maximum of f_S over all 2^M two-partitions.  Throws
/// std::invalid_argument for M > 20.
Grouping2Result solve_grouping2_bruteforce(const GroupingInstance2& inst);

/// Satisfying assignment when the grouping optimum reaches 4 (re-verified
/// against the formula); std::nullopt means unsatisfiable.
std::optional<std::vector<bool>> extract_sat_assignment(const BooleanFormula& formula,
                                                        const Grouping2Result& result);

}  // namespace mcast
