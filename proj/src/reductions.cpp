#include "mcast/reductions.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <stdexcept>

namespace mcast {

void ThreePartitionInstance::validate() const {
    if (m < 1) throw std::invalid_argument("3P instance: m must be >= 1");
    if (static_cast<int>(values.size()) != 3 * m)
        throw std::invalid_argument("3P instance: expected P = 3m values, got " +
                                    std::to_string(values.size()));
    long long sum = 0;
    for (long long v : values) {
        if (v <= 0) throw std::invalid_argument("3P instance: values must be positive");
        // strict bounds B/4 < v < B/2, checked without division
        if (!(4 * v > bound))
            throw std::invalid_argument("3P instance: value " + std::to_string(v) +
                                        " violates B/4 < value");
        if (!(2 * v < bound))
            throw std::invalid_argument("3P instance: value " + std::to_string(v) +
                                        " violates value < B/2");
        sum += v;
    }
    if (sum != static_cast<long long>(m) * bound)
        throw std::invalid_argument("3P instance: values sum to " + std::to_string(sum) +
                                    ", expected m*B = " + std::to_string(m * bound));
}

std::pair<RateMatrix, double> reduce_3p_to_blp(const ThreePartitionInstance& inst) {
    inst.validate();
    const int n = static_cast<int>(inst.values.size());
    RateMatrix rates(inst.m, n);
    for (int i = 0; i < inst.m; ++i)
        for (int k = 0; k < n; ++k)
            rates.at(i, k) = static_cast<double>(inst.values[k]);  // r_ik = rho_k for every i
    return {std::move(rates), static_cast<double>(inst.bound)};
}

std::optional<TriplePartition> extract_3p_solution(const ExactResult& solution,
                                                   const ThreePartitionInstance& inst) {
    if (solution.status != ExactResult::Status::Feasible) return std::nullopt;
    const AllocationState& state = solution.witness;
    TriplePartition partition(inst.m);
    std::vector<int> fill(inst.m, 0);
    for (int j = 0; j < state.n_prbs(); ++j) {
        const int o = state.owner[j];
        if (o == 0) continue;
        if (fill[o - 1] >= 3)
            throw std::logic_error("extract_3p_solution: group received more than 3 values");
        partition[o - 1][fill[o - 1]++] = j;
    }
    for (int i = 0; i < inst.m; ++i)
        if (fill[i] != 3)
            throw std::logic_error("extract_3p_solution: group holds fewer than 3 values");
    if (!verify_3p(inst, partition))
        throw std::logic_error("extract_3p_solution: extracted cells do not sum to B");
    return partition;
}

bool verify_3p(const ThreePartitionInstance& inst, const TriplePartition& partition) {
    if (static_cast<int>(partition.size()) != inst.m) return false;
    std::vector<char> used(inst.values.size(), 0);
    for (const auto& cell : partition) {
        long long sum = 0;
        for (int idx : cell) {
            if (idx < 0 || idx >= static_cast<int>(inst.values.size())) return false;
            if (used[idx]) return false;
            used[idx] = 1;
            sum += inst.values[idx];
        }
        if (sum != inst.bound) return false;
    }
    return std::all_of(used.begin(), used.end(), [](char u) { return u != 0; });
}

bool BooleanFormula::evaluate(const std::vector<bool>& assignment) const {
    if (static_cast<int>(assignment.size()) != n_vars)
        throw std::invalid_argument("BooleanFormula::evaluate: assignment length mismatch");
    std::vector<char> value(nodes.size(), 0);
    // nodes were appended children-first by the parser, so one forward pass
    // evaluates bottom-up
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        const Node& node = nodes[k];
        switch (node.kind) {
            case Node::Kind::Var:
                value[k] = assignment[node.var];
                break;
            case Node::Kind::Not:
                value[k] = !value[node.kids[0]];
                break;
            case Node::Kind::And: {
                bool v = true;
                for (int kid : node.kids) v = v && value[kid];
                value[k] = v;
                break;
            }
            case Node::Kind::Or: {
                bool v = false;
                for (int kid : node.kids) v = v || value[kid];
                value[k] = v;
                break;
            }
        }
    }
    return value[root] != 0;
}

namespace {

struct Tokenizer {
    std::string_view text;
    std::size_t pos = 0;

    std::string next() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
        if (pos >= text.size()) return {};
        if (text[pos] == '(' || text[pos] == ')') return std::string(1, text[pos++]);
        std::size_t start = pos;
        while (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos])) &&
               text[pos] != '(' && text[pos] != ')')
            ++pos;
        return std::string(text.substr(start, pos - start));
    }
};

int parse_expr(Tokenizer& tok, BooleanFormula& formula, const std::string& first);

int parse_var(const std::string& token, BooleanFormula& formula) {
    if (token.size() < 2 || token[0] != 'x')
        throw std::invalid_argument("formula parse: expected variable like x3, got '" + token +
                                    "'");
    int idx = 0;
    for (std::size_t i = 1; i < token.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(token[i])))
            throw std::invalid_argument("formula parse: bad variable '" + token + "'");
        idx = idx * 10 + (token[i] - '0');
    }
    if (idx < 1) throw std::invalid_argument("formula parse: variables are 1-based");
    BooleanFormula::Node node;
    node.kind = BooleanFormula::Node::Kind::Var;
    node.var = idx - 1;
    formula.nodes.push_back(node);
    formula.n_vars = std::max(formula.n_vars, idx);
    return static_cast<int>(formula.nodes.size()) - 1;
}

int parse_expr(Tokenizer& tok, BooleanFormula& formula, const std::string& first) {
    if (first.empty()) throw std::invalid_argument("formula parse: unexpected end of input");
    if (first != "(") return parse_var(first, formula);

    const std::string op = tok.next();
    BooleanFormula::Node node;
    if (op == "and")
        node.kind = BooleanFormula::Node::Kind::And;
    else if (op == "or")
        node.kind = BooleanFormula::Node::Kind::Or;
    else if (op == "not")
        node.kind = BooleanFormula::Node::Kind::Not;
    else
        throw std::invalid_argument("formula parse: unknown operator '" + op + "'");

    std::vector<int> kids;
    while (true) {
        const std::string token = tok.next();
        if (token == ")") break;
        kids.push_back(parse_expr(tok, formula, token));
    }
    if (node.kind == BooleanFormula::Node::Kind::Not && kids.size() != 1)
        throw std::invalid_argument("formula parse: not takes exactly one operand");
    if (node.kind != BooleanFormula::Node::Kind::Not && kids.size() < 2)
        throw std::invalid_argument("formula parse: " + op + " takes at least two operands");
    node.kids = std::move(kids);
    formula.nodes.push_back(node);
    return static_cast<int>(formula.nodes.size()) - 1;
}

}  // namespace

BooleanFormula BooleanFormula::parse(std::string_view text, int n_vars) {
    BooleanFormula formula;
    Tokenizer tok{text};
    formula.root = parse_expr(tok, formula, tok.next());
    const std::string rest = tok.next();
    if (!rest.empty())
        throw std::invalid_argument("formula parse: trailing input '" + rest + "'");
    if (n_vars >= 0) {
        if (formula.n_vars > n_vars)
            throw std::invalid_argument("formula parse: variable index exceeds declared count");
        formula.n_vars = n_vars;
    }
    return formula;
}

GroupingInstance2 reduce_sat_to_grouping(const BooleanFormula& formula) {
    GroupingInstance2 inst;
    inst.n_ues = formula.n_vars;
    inst.f_s = [formula](const std::vector<int>& g1, const std::vector<int>& g2) -> double {
        std::vector<char> seen(formula.n_vars, 0);
        std::vector<bool> assignment(formula.n_vars, false);
        for (int ue : g1) {
            if (ue < 0 || ue >= formula.n_vars || seen[ue])
                throw std::invalid_argument("f_S: groups must partition the UE set");
            seen[ue] = 1;
            assignment[ue] = true;
        }
        for (int ue : g2) {
            if (ue < 0 || ue >= formula.n_vars || seen[ue])
                throw std::invalid_argument("f_S: groups must partition the UE set");
            seen[ue] = 1;
        }
        for (char s : seen)
            if (!s) throw std::invalid_argument("f_S: groups must cover the UE set");
        return 3.0 + (formula.evaluate(assignment) ? 1.0 : 0.0);
    };
    return inst;
}

Grouping2Result solve_grouping2_bruteforce(const GroupingInstance2& inst) {
    if (inst.n_ues > 20)
        throw std::invalid_argument("solve_grouping2_bruteforce: limited to 20 UEs");
    Grouping2Result best;
    best.best_value = -1.0;
    const unsigned long long n_masks = 1ULL << inst.n_ues;
    for (unsigned long long mask = 0; mask < n_masks; ++mask) {
        std::vector<int> g1, g2;
        for (int u = 0; u < inst.n_ues; ++u)
            (mask >> u & 1 ? g1 : g2).push_back(u);
        const double v = inst.f_s(g1, g2);
        if (v > best.best_value) {
            best.best_value = v;
            best.g1 = std::move(g1);
            best.g2 = std::move(g2);
        }
    }
    return best;
}

std::optional<std::vector<bool>> extract_sat_assignment(const BooleanFormula& formula,
                                                        const Grouping2Result& result) {
    if (result.best_value < 3.5) return std::nullopt;
    std::vector<bool> assignment(formula.n_vars, false);
    for (int ue : result.g1) assignment[ue] = true;
    if (!formula.evaluate(assignment))
        throw std::logic_error("extract_sat_assignment: grouping scored 4 but formula is false");
    return assignment;
}

}  // namespace mcast
