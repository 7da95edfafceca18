// settle.hpp : weighted MAX-SAT settlement over hypothesis truth assignments
//
// Hard constraints gate feasibility, soft constraints carry weight; an
// interpretation is a feasible assignment maximizing satisfied soft weight.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace deepread {

// Boolean formula over hypothesis ids. xor means exactly one argument true.
struct Formula {
    enum class Kind { Var, Not, And, Or, Xor };
    Kind kind = Kind::Var;
    int var = -1;
    std::vector<Formula> children;

    static Formula variable(int id);
    static Formula negate(Formula f);
    static Formula conj(std::vector<Formula> fs);
    static Formula disj(std::vector<Formula> fs);
    static Formula exactly_one(std::vector<Formula> fs);
    static Formula exactly_one_of(const std::vector<int>& ids);

    // Every variable id mentioned, ascending and unique.
    std::vector<int> variables() const;
    std::string to_string() const;

    bool operator==(const Formula& other) const;
};

// Textual form like "and(1,or(2,3),not(4))". Throws std::runtime_error.
Formula parse_formula(const std::string& text);

struct SoftConstraint {
    double weight = 1.0;
    Formula formula;
};

struct ConstraintSystem {
    // Declared variables; labels are optional and used by trace output.
    std::vector<int> variables;
    std::map<int, std::string> labels;
    std::vector<Formula> hard;
    std::vector<SoftConstraint> soft;

    void declare(int id, std::string label = "");
    bool declared(int id) const;
    // Declares every variable a formula mentions (used by tests/tools).
    void add_hard(Formula f);
    void add_soft(double weight, Formula f);
    double total_soft_weight() const;
    // Throws if a formula references an undeclared variable or a soft weight
    // is not positive.
    void validate() const;
};

using Assignment = std::map<int, bool>;

struct EvalResult {
    bool feasible = false;
    double score = 0.0;
    std::vector<int> violated_hard;  // indices into system.hard
};

// Assignment must be total over system.variables; throws otherwise.
EvalResult evaluate(const ConstraintSystem& system, const Assignment& assignment);
bool eval_formula(const Formula& f, const Assignment& assignment);

struct Interpretation {
    Assignment assignment;
    double score = 0.0;
    bool feasible = false;

    std::vector<int> true_ids() const;
};

struct SolveConfig {
    uint64_t seed = 0;
    int max_restarts = 32;
    int max_flips_per_var = 200;  // flip budget is max_flips_per_var * variables
    double noise = 0.1;
    int exact_threshold = 24;
};

// Exhaustive search. Returns every feasible assignment achieving the maximum
// score, sorted lexicographically by true-id set; empty when no feasible
// assignment exists. Throws std::runtime_error past config.exact_threshold.
// Enumeration is decomposed along hard exactly-one groups over plain
// variables, so group-structured systems stay cheap.
std::vector<Interpretation> solve_exact(const ConstraintSystem& system, const SolveConfig& config);

struct StochasticResult {
    std::optional<Interpretation> best;  // nullopt: no feasible point found in budget
    long flips = 0;
    int restarts = 0;

    bool feasibility_unknown() const { return !best.has_value(); }
};

// Seed-deterministic stochastic local search: per restart, a random
// assignment is repaired to hard-feasibility greedily, then hill-climbed with
// hard-feasibility-preserving moves and noise-probability random walk.
StochasticResult solve_stochastic(const ConstraintSystem& system, const SolveConfig& config);

// Constraint-system text format used by the `solve` CLI command:
//   var <id> "<label>"
//   hard <formula>
//   soft <weight> <formula>
ConstraintSystem parse_system(const std::string& text, const std::string& file = "<string>");
ConstraintSystem load_system(const std::string& path);
std::string format_system(const ConstraintSystem& system);

}  // namespace deepread
