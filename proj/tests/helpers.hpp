// helpers.hpp : shared test fixtures — the worked milk constraint system,
// a brute-force oracle independent of the solver, and a random-system
// generator for solver equivalence checks
#pragma once

#include <random>
#include <stdexcept>
#include <string>

#include "deepread/settle.hpp"
#include "deepread/sexpr.hpp"

namespace testutil {

using namespace deepread;

// The sixteen-hypothesis system: variables 1..16, five hard exactly-one
// groups, eight unit-weight soft constraints.
inline ConstraintSystem milk_system() {
    ConstraintSystem s;
    for (int i = 1; i <= 16; ++i) s.declare(i);
    s.hard.push_back(parse_formula("xor(1,2)"));
    s.hard.push_back(parse_formula("xor(3,4)"));
    s.hard.push_back(parse_formula("xor(5,6,7)"));
    s.hard.push_back(parse_formula("xor(9,12,13)"));
    s.hard.push_back(parse_formula("xor(14,15,16)"));
    s.soft.push_back({1, parse_formula("and(1,3,5,12)")});
    s.soft.push_back({1, parse_formula("and(1,3,or(5,6),9)")});
    s.soft.push_back({1, parse_formula("and(2,4,5,13)")});
    s.soft.push_back({1, parse_formula("and(8,9)")});
    s.soft.push_back({1, parse_formula("and(or(10,11),12)")});
    s.soft.push_back({1, parse_formula("and(5,14)")});
    s.soft.push_back({1, parse_formula("and(5,15)")});
    s.soft.push_back({1, parse_formula("and(6,16)")});
    return s;
}

inline Assignment assignment_of(const ConstraintSystem& s, const std::vector<int>& true_ids) {
    Assignment a;
    for (int v : s.variables) a[v] = false;
    for (int v : true_ids) a[v] = true;
    return a;
}

struct OracleResult {
    bool any_feasible = false;
    double best = 0;
    long feasible_count = 0;
    std::vector<std::vector<int>> optima;  // true-id sets
};

// Plain 2^n enumeration through the public evaluate(); nothing shared with
// the solver's enumeration strategy.
inline OracleResult brute_force(const ConstraintSystem& s) {
    OracleResult r;
    size_t n = s.variables.size();
    if (n > 22) throw std::runtime_error("oracle limited to 22 variables");
    for (uint64_t mask = 0; mask < (uint64_t{1} << n); ++mask) {
        Assignment a;
        for (size_t i = 0; i < n; ++i) a[s.variables[i]] = (mask >> i) & 1;
        EvalResult e = evaluate(s, a);
        if (!e.feasible) continue;
        r.feasible_count++;
        if (!r.any_feasible || e.score > r.best + 1e-9) {
            r.any_feasible = true;
            r.best = e.score;
            r.optima.clear();
        }
        if (e.score > r.best - 1e-9) {
            std::vector<int> t;
            for (size_t i = 0; i < n; ++i)
                if ((mask >> i) & 1) t.push_back(s.variables[i]);
            r.optima.push_back(t);
        }
    }
    std::sort(r.optima.begin(), r.optima.end());
    return r;
}

// Seed-fixed random system: xor groups over a prefix of the variables,
// free variables after, random and/or soft formulas. Always hard-feasible.
inline ConstraintSystem random_system(uint64_t seed, int max_vars = 20, int max_soft = 35) {
    std::mt19937_64 rng(seed);
    ConstraintSystem s;
    std::uniform_int_distribution<int> nvars(6, max_vars);
    int n = nvars(rng);
    for (int i = 1; i <= n; ++i) s.declare(i);

    int next = 1;
    std::uniform_int_distribution<int> group_size(2, 4);
    while (next + 1 <= n && next <= n * 2 / 3) {
        int size = std::min(group_size(rng), n - next + 1);
        if (size < 2) break;
        std::vector<int> members;
        for (int i = 0; i < size; ++i) members.push_back(next++);
        s.hard.push_back(Formula::exactly_one_of(members));
    }

    std::uniform_int_distribution<int> nsoft(5, max_soft);
    std::uniform_int_distribution<int> var(1, n);
    std::uniform_int_distribution<int> weight(1, 3);
    std::uniform_int_distribution<int> shape(0, 3);
    std::uniform_int_distribution<int> arity(2, 4);
    int count = nsoft(rng);
    for (int i = 0; i < count; ++i) {
        std::vector<Formula> literals;
        int k = arity(rng);
        for (int j = 0; j < k; ++j) {
            Formula lit = Formula::variable(var(rng));
            if (rng() & 1) lit = Formula::negate(std::move(lit));
            literals.push_back(std::move(lit));
        }
        Formula f;
        switch (shape(rng)) {
            case 0:
                f = literals[0];
                break;
            case 1:
                f = Formula::conj(std::move(literals));
                break;
            case 2:
                f = Formula::disj(std::move(literals));
                break;
            default: {
                Formula inner = Formula::disj({literals[0], literals[1]});
                std::vector<Formula> outer{std::move(inner)};
                for (size_t j = 2; j < literals.size(); ++j) outer.push_back(std::move(literals[j]));
                f = Formula::conj(std::move(outer));
                break;
            }
        }
        s.soft.push_back({static_cast<double>(weight(rng)), std::move(f)});
    }
    return s;
}

inline std::string data_path(const std::string& rel) {
    return std::string(DEEPREAD_DATA_DIR) + "/" + rel;
}

}  // namespace testutil
