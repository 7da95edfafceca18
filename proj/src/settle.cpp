#include "deepread/settle.hpp"

#include "deepread/sexpr.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <random>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace deepread {

namespace {
constexpr double kScoreEps = 1e-9;
}

Formula Formula::variable(int id) {
    Formula f;
    f.kind = Kind::Var;
    f.var = id;
    return f;
}

Formula Formula::negate(Formula f) {
    Formula n;
    n.kind = Kind::Not;
    n.children.push_back(std::move(f));
    return n;
}

Formula Formula::conj(std::vector<Formula> fs) {
    Formula f;
    f.kind = Kind::And;
    f.children = std::move(fs);
    return f;
}

Formula Formula::disj(std::vector<Formula> fs) {
    Formula f;
    f.kind = Kind::Or;
    f.children = std::move(fs);
    return f;
}

Formula Formula::exactly_one(std::vector<Formula> fs) {
    Formula f;
    f.kind = Kind::Xor;
    f.children = std::move(fs);
    return f;
}

Formula Formula::exactly_one_of(const std::vector<int>& ids) {
    std::vector<Formula> fs;
    fs.reserve(ids.size());
    for (int id : ids) fs.push_back(variable(id));
    return exactly_one(std::move(fs));
}

static void collect_vars(const Formula& f, std::set<int>& out) {
    if (f.kind == Formula::Kind::Var) {
        out.insert(f.var);
        return;
    }
    for (const auto& c : f.children) collect_vars(c, out);
}

std::vector<int> Formula::variables() const {
    std::set<int> s;
    collect_vars(*this, s);
    return {s.begin(), s.end()};
}

std::string Formula::to_string() const {
    switch (kind) {
        case Kind::Var:
            return std::to_string(var);
        case Kind::Not:
            return "not(" + children[0].to_string() + ")";
        default: {
            const char* name = kind == Kind::And ? "and" : kind == Kind::Or ? "or" : "xor";
            std::string s = std::string(name) + "(";
            for (size_t i = 0; i < children.size(); ++i) {
                if (i) s += ",";
                s += children[i].to_string();
            }
            return s + ")";
        }
    }
}

bool Formula::operator==(const Formula& other) const {
    return kind == other.kind && var == other.var && children == other.children;
}

namespace {

struct FormulaReader {
    const std::string& s;
    size_t pos = 0;

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) pos++;
    }

    Formula parse() {
        skip_ws();
        if (pos >= s.size()) throw std::runtime_error("unexpected end of formula: " + s);
        if (std::isdigit(static_cast<unsigned char>(s[pos])) ||
            (s[pos] == '-' && pos + 1 < s.size() && std::isdigit(static_cast<unsigned char>(s[pos + 1])))) {
            size_t start = pos;
            if (s[pos] == '-') pos++;
            while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) pos++;
            return Formula::variable(std::stoi(s.substr(start, pos - start)));
        }
        size_t start = pos;
        while (pos < s.size() && std::isalpha(static_cast<unsigned char>(s[pos]))) pos++;
        std::string name = s.substr(start, pos - start);
        skip_ws();
        if (pos >= s.size() || s[pos] != '(')
            throw std::runtime_error("expected '(' after '" + name + "' in formula: " + s);
        pos++;  // '('
        std::vector<Formula> args;
        skip_ws();
        if (pos < s.size() && s[pos] == ')') {
            pos++;
        } else {
            while (true) {
                args.push_back(parse());
                skip_ws();
                if (pos >= s.size()) throw std::runtime_error("unterminated formula: " + s);
                if (s[pos] == ',') {
                    pos++;
                    continue;
                }
                if (s[pos] == ')') {
                    pos++;
                    break;
                }
                throw std::runtime_error("expected ',' or ')' in formula: " + s);
            }
        }
        if (name == "not") {
            if (args.size() != 1) throw std::runtime_error("not() takes one argument: " + s);
            return Formula::negate(std::move(args[0]));
        }
        if (name == "and") return Formula::conj(std::move(args));
        if (name == "or") return Formula::disj(std::move(args));
        if (name == "xor") return Formula::exactly_one(std::move(args));
        throw std::runtime_error("unknown operator '" + name + "' in formula: " + s);
    }
};

}  // namespace

Formula parse_formula(const std::string& text) {
    FormulaReader r{text};
    Formula f = r.parse();
    r.skip_ws();
    if (r.pos != text.size()) throw std::runtime_error("trailing characters in formula: " + text);
    return f;
}

void ConstraintSystem::declare(int id, std::string label) {
    if (!declared(id)) variables.push_back(id);
    if (!label.empty()) labels[id] = std::move(label);
}

bool ConstraintSystem::declared(int id) const {
    return std::find(variables.begin(), variables.end(), id) != variables.end();
}

void ConstraintSystem::add_hard(Formula f) {
    for (int v : f.variables()) declare(v);
    hard.push_back(std::move(f));
}

void ConstraintSystem::add_soft(double weight, Formula f) {
    for (int v : f.variables()) declare(v);
    soft.push_back({weight, std::move(f)});
}

double ConstraintSystem::total_soft_weight() const {
    double t = 0;
    for (const auto& s : soft) t += s.weight;
    return t;
}

void ConstraintSystem::validate() const {
    std::unordered_set<int> declared_ids(variables.begin(), variables.end());
    auto check = [&](const Formula& f) {
        for (int v : f.variables())
            if (!declared_ids.count(v))
                throw std::runtime_error("formula references undeclared variable " + std::to_string(v));
    };
    for (const auto& h : hard) check(h);
    for (const auto& s : soft) {
        check(s.formula);
        if (!(s.weight > 0)) throw std::runtime_error("soft constraint weight must be positive");
    }
}

bool eval_formula(const Formula& f, const Assignment& assignment) {
    switch (f.kind) {
        case Formula::Kind::Var: {
            auto it = assignment.find(f.var);
            if (it == assignment.end())
                throw std::runtime_error("partial assignment: variable " + std::to_string(f.var) + " unassigned");
            return it->second;
        }
        case Formula::Kind::Not:
            return !eval_formula(f.children[0], assignment);
        case Formula::Kind::And:
            for (const auto& c : f.children)
                if (!eval_formula(c, assignment)) return false;
            return true;
        case Formula::Kind::Or:
            for (const auto& c : f.children)
                if (eval_formula(c, assignment)) return true;
            return false;
        case Formula::Kind::Xor: {
            int count = 0;
            for (const auto& c : f.children)
                if (eval_formula(c, assignment) && ++count > 1) return false;
            return count == 1;
        }
    }
    return false;
}

EvalResult evaluate(const ConstraintSystem& system, const Assignment& assignment) {
    for (int v : system.variables)
        if (!assignment.count(v))
            throw std::runtime_error("partial assignment: variable " + std::to_string(v) + " unassigned");
    EvalResult r;
    r.feasible = true;
    for (size_t i = 0; i < system.hard.size(); ++i) {
        if (!eval_formula(system.hard[i], assignment)) {
            r.feasible = false;
            r.violated_hard.push_back(static_cast<int>(i));
        }
    }
    for (const auto& s : system.soft)
        if (eval_formula(s.formula, assignment)) r.score += s.weight;
    return r;
}

std::vector<int> Interpretation::true_ids() const {
    std::vector<int> ids;
    for (const auto& [id, v] : assignment)
        if (v) ids.push_back(id);
    return ids;
}

// ---------------------------------------------------------------------------
// Internal compressed representation shared by both solvers.

namespace {

struct Compiled {
    // dense index <-> external id
    std::vector<int> ids;
    std::unordered_map<int, int> index;

    struct CFormula {
        Formula::Kind kind;
        int var = -1;
        std::vector<CFormula> children;
    };

    std::vector<CFormula> hard;
    std::vector<CFormula> soft;
    std::vector<double> soft_weight;

    // exactly-one groups usable as enumeration/move structure
    std::vector<std::vector<int>> groups;    // dense indexes
    std::vector<int> group_of;               // dense index -> group or -1
    std::vector<int> residual_hard;          // indexes into hard not captured by groups
    std::vector<int> free_vars;              // mentioned, ungrouped
    std::vector<int> pinned;                 // mentioned nowhere: pinned false

    std::vector<std::vector<int>> touching_soft;  // dense var -> soft indexes
    std::vector<std::vector<int>> touching_hard;  // dense var -> residual hard indexes

    CFormula compile(const Formula& f) const {
        CFormula c;
        c.kind = f.kind;
        if (f.kind == Formula::Kind::Var)
            c.var = index.at(f.var);
        for (const auto& ch : f.children) c.children.push_back(compile(ch));
        return c;
    }
};

bool eval_compiled(const Compiled::CFormula& f, const std::vector<char>& values) {
    switch (f.kind) {
        case Formula::Kind::Var:
            return values[f.var] != 0;
        case Formula::Kind::Not:
            return !eval_compiled(f.children[0], values);
        case Formula::Kind::And:
            for (const auto& c : f.children)
                if (!eval_compiled(c, values)) return false;
            return true;
        case Formula::Kind::Or:
            for (const auto& c : f.children)
                if (eval_compiled(c, values)) return true;
            return false;
        case Formula::Kind::Xor: {
            int count = 0;
            for (const auto& c : f.children)
                if (eval_compiled(c, values) && ++count > 1) return false;
            return count == 1;
        }
    }
    return false;
}

void collect_compiled_vars(const Compiled::CFormula& f, std::set<int>& out) {
    if (f.kind == Formula::Kind::Var) {
        out.insert(f.var);
        return;
    }
    for (const auto& c : f.children) collect_compiled_vars(c, out);
}

Compiled compile_system(const ConstraintSystem& system) {
    system.validate();
    Compiled c;
    c.ids = system.variables;
    std::sort(c.ids.begin(), c.ids.end());
    for (size_t i = 0; i < c.ids.size(); ++i) c.index[c.ids[i]] = static_cast<int>(i);
    const int n = static_cast<int>(c.ids.size());

    for (const auto& h : system.hard) c.hard.push_back(c.compile(h));
    for (const auto& s : system.soft) {
        c.soft.push_back(c.compile(s.formula));
        c.soft_weight.push_back(s.weight);
    }

    // Hard xor over plain variables, pairwise disjoint, becomes an
    // exactly-one choice group; every other hard formula is a filter.
    c.group_of.assign(n, -1);
    for (size_t hi = 0; hi < c.hard.size(); ++hi) {
        const auto& f = c.hard[hi];
        bool plain = f.kind == Formula::Kind::Xor && !f.children.empty();
        std::vector<int> members;
        if (plain) {
            for (const auto& ch : f.children) {
                if (ch.kind != Formula::Kind::Var || c.group_of[ch.var] != -1 ||
                    std::find(members.begin(), members.end(), ch.var) != members.end()) {
                    plain = false;
                    break;
                }
                members.push_back(ch.var);
            }
        }
        if (plain) {
            for (int v : members) c.group_of[v] = static_cast<int>(c.groups.size());
            c.groups.push_back(std::move(members));
        } else {
            c.residual_hard.push_back(static_cast<int>(hi));
        }
    }

    std::set<int> mentioned;
    for (const auto& h : c.hard) collect_compiled_vars(h, mentioned);
    for (const auto& s : c.soft) collect_compiled_vars(s, mentioned);
    for (int v = 0; v < n; ++v) {
        if (c.group_of[v] != -1) continue;
        if (mentioned.count(v))
            c.free_vars.push_back(v);
        else
            c.pinned.push_back(v);  // unmentioned anywhere: settles false
    }

    c.touching_soft.assign(n, {});
    c.touching_hard.assign(n, {});
    for (size_t si = 0; si < c.soft.size(); ++si) {
        std::set<int> vs;
        collect_compiled_vars(c.soft[si], vs);
        for (int v : vs) c.touching_soft[v].push_back(static_cast<int>(si));
    }
    for (int hi : c.residual_hard) {
        std::set<int> vs;
        collect_compiled_vars(c.hard[hi], vs);
        for (int v : vs) c.touching_hard[v].push_back(hi);
    }
    return c;
}

double score_of(const Compiled& c, const std::vector<char>& values) {
    double score = 0;
    for (size_t i = 0; i < c.soft.size(); ++i)
        if (eval_compiled(c.soft[i], values)) score += c.soft_weight[i];
    return score;
}

bool residual_feasible(const Compiled& c, const std::vector<char>& values) {
    for (int hi : c.residual_hard)
        if (!eval_compiled(c.hard[hi], values)) return false;
    return true;
}

Assignment to_assignment(const Compiled& c, const std::vector<char>& values) {
    Assignment a;
    for (size_t i = 0; i < c.ids.size(); ++i) a[c.ids[i]] = values[i] != 0;
    return a;
}

std::vector<int> true_set(const Compiled& c, const std::vector<char>& values) {
    std::vector<int> t;
    for (size_t i = 0; i < c.ids.size(); ++i)
        if (values[i]) t.push_back(c.ids[i]);
    return t;
}

// Walks every hard-group-consistent assignment; onCandidate sees the value
// vector (residual hard constraints not yet checked).
template <typename Fn>
void enumerate(const Compiled& c, Fn&& on_candidate) {
    std::vector<char> values(c.ids.size(), 0);
    const size_t ngroups = c.groups.size();
    const size_t nfree = c.free_vars.size();
    std::vector<size_t> choice(ngroups, 0);
    for (const auto& g : c.groups)
        if (g.empty()) return;  // xor() is unsatisfiable

    while (true) {
        for (size_t gi = 0; gi < ngroups; ++gi)
            for (size_t m = 0; m < c.groups[gi].size(); ++m)
                values[c.groups[gi][m]] = (m == choice[gi]) ? 1 : 0;
        const uint64_t limit = nfree >= 63 ? 0 : (uint64_t{1} << nfree);
        for (uint64_t mask = 0; mask < std::max<uint64_t>(limit, 1); ++mask) {
            for (size_t fi = 0; fi < nfree; ++fi)
                values[c.free_vars[fi]] = (mask >> fi) & 1 ? 1 : 0;
            on_candidate(values);
            if (limit == 0) break;
        }
        // odometer over group choices
        size_t gi = 0;
        while (gi < ngroups) {
            if (++choice[gi] < c.groups[gi].size()) break;
            choice[gi] = 0;
            gi++;
        }
        if (gi == ngroups) break;
        if (ngroups == 0) break;
    }
}

}  // namespace

std::vector<Interpretation> solve_exact(const ConstraintSystem& system, const SolveConfig& config) {
    if (static_cast<int>(system.variables.size()) > config.exact_threshold)
        throw std::runtime_error("solve_exact: " + std::to_string(system.variables.size()) +
                                 " variables exceed exact threshold " + std::to_string(config.exact_threshold));
    Compiled c = compile_system(system);
    // exhaustive over unmentioned variables too: every optimum is returned
    for (int v : c.pinned) c.free_vars.push_back(v);
    c.pinned.clear();

    double best = -1;
    std::vector<std::vector<char>> optima;
    enumerate(c, [&](const std::vector<char>& values) {
        if (!residual_feasible(c, values)) return;
        double s = score_of(c, values);
        if (s > best + kScoreEps) {
            best = s;
            optima.clear();
            optima.push_back(values);
        } else if (s > best - kScoreEps) {
            optima.push_back(values);
        }
    });

    std::vector<Interpretation> result;
    std::vector<std::pair<std::vector<int>, const std::vector<char>*>> keyed;
    keyed.reserve(optima.size());
    for (const auto& v : optima) keyed.emplace_back(true_set(c, v), &v);
    std::sort(keyed.begin(), keyed.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (const auto& [ts, v] : keyed) {
        Interpretation interp;
        interp.assignment = to_assignment(c, *v);
        interp.score = best;
        interp.feasible = true;
        result.push_back(std::move(interp));
    }
    return result;
}

// ---------------------------------------------------------------------------
// Stochastic local search

namespace {

struct SearchState {
    const Compiled& c;
    std::vector<char> values;
    std::vector<char> soft_sat;
    double score = 0;

    explicit SearchState(const Compiled& c_) : c(c_), values(c_.ids.size(), 0), soft_sat(c_.soft.size(), 0) {}

    void rescore() {
        score = 0;
        for (size_t i = 0; i < c.soft.size(); ++i) {
            soft_sat[i] = eval_compiled(c.soft[i], values) ? 1 : 0;
            if (soft_sat[i]) score += c.soft_weight[i];
        }
    }

    // Applies a move (set of vars whose value flips) and refreshes touched softs.
    void apply(const std::vector<int>& flipped) {
        for (int v : flipped) values[v] = values[v] ? 0 : 1;
        std::set<int> touched;
        for (int v : flipped)
            for (int si : c.touching_soft[v]) touched.insert(si);
        for (int si : touched) {
            char now = eval_compiled(c.soft[si], values) ? 1 : 0;
            if (now != soft_sat[si]) {
                score += now ? c.soft_weight[si] : -c.soft_weight[si];
                soft_sat[si] = now;
            }
        }
    }

    bool hard_ok_after(const std::vector<int>& flipped) {
        for (int v : flipped) values[v] = values[v] ? 0 : 1;
        bool ok = true;
        std::set<int> touched;
        for (int v : flipped)
            for (int hi : c.touching_hard[v]) touched.insert(hi);
        for (int hi : touched)
            if (!eval_compiled(c.hard[hi], values)) {
                ok = false;
                break;
            }
        for (int v : flipped) values[v] = values[v] ? 0 : 1;
        return ok;
    }

    double delta_if(const std::vector<int>& flipped) {
        double before = score;
        apply(flipped);
        double after = score;
        // undo
        apply(flipped);
        score = before;
        return after - before;
    }
};

// Candidate moves: flip a free var, or reassign a group's true member.
std::vector<std::vector<int>> moves_for_var(const Compiled& c, const std::vector<char>& values, int v) {
    std::vector<std::vector<int>> out;
    int g = c.group_of[v];
    if (g < 0) {
        out.push_back({v});
        return out;
    }
    int current = -1;
    for (int m : c.groups[g])
        if (values[m]) current = m;
    if (current == v) {
        for (int m : c.groups[g])
            if (m != v) out.push_back({v, m});
    } else if (current >= 0) {
        out.push_back({current, v});
    } else {
        out.push_back({v});
    }
    return out;
}

}  // namespace

StochasticResult solve_stochastic(const ConstraintSystem& system, const SolveConfig& config) {
    Compiled c = compile_system(system);
    StochasticResult result;
    const int n = static_cast<int>(c.ids.size());
    if (n == 0) {
        Interpretation empty;
        empty.feasible = system.hard.empty();
        for (const auto& h : system.hard)
            if (h.variables().empty() && !eval_formula(h, {})) empty.feasible = false;
        if (empty.feasible) {
            empty.score = 0;
            for (const auto& s : system.soft)
                if (eval_formula(s.formula, {})) empty.score += s.weight;
            result.best = empty;
        }
        return result;
    }

    const long flip_budget = static_cast<long>(config.max_flips_per_var) * n;
    double best_score = -1;
    std::vector<char> best_values;
    const double total = system.total_soft_weight();

    for (int restart = 0; restart < config.max_restarts; ++restart) {
        result.restarts = restart + 1;
        std::mt19937_64 rng(config.seed * 0x9E3779B97F4A7C15ull + static_cast<uint64_t>(restart));
        SearchState state(c);

        // initial assignment: one true member per group, random free vars
        for (const auto& g : c.groups) {
            if (g.empty()) return result;  // unsatisfiable xor()
            std::uniform_int_distribution<size_t> pick(0, g.size() - 1);
            state.values[g[pick(rng)]] = 1;
        }
        for (int v : c.free_vars) state.values[v] = rng() & 1 ? 1 : 0;

        // greedy repair of residual hard constraints
        bool feasible = residual_feasible(c, state.values);
        for (int attempt = 0; !feasible && attempt < 10 * (n + 1); ++attempt) {
            std::vector<int> violated;
            for (int hi : c.residual_hard)
                if (!eval_compiled(c.hard[hi], state.values)) violated.push_back(hi);
            if (violated.empty()) {
                feasible = true;
                break;
            }
            std::uniform_int_distribution<size_t> pick(0, violated.size() - 1);
            int hi = violated[pick(rng)];
            std::set<int> vs;
            collect_compiled_vars(c.hard[hi], vs);
            std::vector<int> candidates(vs.begin(), vs.end());
            std::shuffle(candidates.begin(), candidates.end(), rng);
            bool moved = false;
            for (int v : candidates) {
                for (const auto& move : moves_for_var(c, state.values, v)) {
                    for (int m : move) state.values[m] = state.values[m] ? 0 : 1;
                    size_t now_violated = 0;
                    for (int h2 : c.residual_hard)
                        if (!eval_compiled(c.hard[h2], state.values)) now_violated++;
                    if (now_violated < violated.size()) {
                        moved = true;
                        break;
                    }
                    for (int m : move) state.values[m] = state.values[m] ? 0 : 1;
                }
                if (moved) break;
            }
            if (!moved) break;  // stuck; count remaining attempts toward give-up
            feasible = residual_feasible(c, state.values);
        }
        if (!feasible) continue;

        state.rescore();
        if (state.score > best_score + kScoreEps ||
            (best_values.empty() && best_score < 0)) {
            best_score = state.score;
            best_values = state.values;
        } else if (state.score > best_score - kScoreEps && true_set(c, state.values) < true_set(c, best_values)) {
            best_values = state.values;
        }

        std::uniform_real_distribution<double> unit(0.0, 1.0);
        for (long flip = 0; flip < flip_budget; ++flip) {
            result.flips++;
            // collect legal candidate moves around an unsatisfied soft constraint
            std::vector<int> unsat;
            for (size_t si = 0; si < c.soft.size(); ++si)
                if (!state.soft_sat[si]) unsat.push_back(static_cast<int>(si));
            if (unsat.empty()) break;  // all soft satisfied: global optimum

            std::uniform_int_distribution<size_t> pick(0, unsat.size() - 1);
            int si = unsat[pick(rng)];
            std::set<int> vs;
            collect_compiled_vars(c.soft[si], vs);
            std::vector<std::vector<int>> legal;
            for (int v : vs)
                for (auto& move : moves_for_var(c, state.values, v))
                    if (state.hard_ok_after(move)) legal.push_back(std::move(move));
            if (legal.empty()) continue;

            std::vector<int>* chosen = nullptr;
            if (unit(rng) < config.noise) {
                std::uniform_int_distribution<size_t> pm(0, legal.size() - 1);
                chosen = &legal[pm(rng)];
            } else {
                double best_delta = -1e300;
                for (auto& move : legal) {
                    double d = state.delta_if(move);
                    if (d > best_delta) {
                        best_delta = d;
                        chosen = &move;
                    }
                }
                if (best_delta < 0 && unit(rng) >= config.noise) {
                    // only downhill moves available: take them sometimes anyway
                    // (random walk keeps the search from freezing)
                    std::uniform_int_distribution<size_t> pm(0, legal.size() - 1);
                    chosen = &legal[pm(rng)];
                }
            }
            if (!chosen) continue;
            state.apply(*chosen);
            if (state.score > best_score + kScoreEps) {
                best_score = state.score;
                best_values = state.values;
            } else if (state.score > best_score - kScoreEps &&
                       true_set(c, state.values) < true_set(c, best_values)) {
                best_values = state.values;
            }
            if (best_score >= total - kScoreEps) break;
        }
        if (best_score >= total - kScoreEps) break;
    }

    if (!best_values.empty() || best_score >= 0) {
        Interpretation interp;
        if (best_values.empty()) best_values.assign(c.ids.size(), 0);
        interp.assignment = to_assignment(c, best_values);
        interp.score = best_score;
        interp.feasible = true;
        result.best = interp;
    }
    return result;
}

// ---------------------------------------------------------------------------
// Constraint-system text format

ConstraintSystem parse_system(const std::string& text, const std::string& file) {
    ConstraintSystem system;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        lineno++;
        size_t comment = line.find('#');
        if (comment != std::string::npos) line = line.substr(0, comment);
        std::istringstream ls(line);
        std::string word;
        if (!(ls >> word)) continue;
        try {
            if (word == "var") {
                int id;
                if (!(ls >> id)) throw std::runtime_error("var needs an integer id");
                std::string rest;
                std::getline(ls, rest);
                std::string label;
                size_t q1 = rest.find('"');
                if (q1 != std::string::npos) {
                    size_t q2 = rest.find('"', q1 + 1);
                    if (q2 == std::string::npos) throw std::runtime_error("unterminated label");
                    label = rest.substr(q1 + 1, q2 - q1 - 1);
                }
                system.declare(id, label);
            } else if (word == "hard") {
                std::string rest;
                std::getline(ls, rest);
                system.hard.push_back(parse_formula(rest));
            } else if (word == "soft") {
                double weight;
                if (!(ls >> weight)) throw std::runtime_error("soft needs a weight");
                std::string rest;
                std::getline(ls, rest);
                system.soft.push_back({weight, parse_formula(rest)});
            } else {
                throw std::runtime_error("unknown directive '" + word + "'");
            }
        } catch (const std::exception& e) {
            throw ParseError(file, lineno, e.what());
        }
    }
    try {
        system.validate();
    } catch (const std::exception& e) {
        throw ParseError(file, lineno, e.what());
    }
    return system;
}

ConstraintSystem load_system(const std::string& path) {
    return parse_system(read_text_file(path), path);
}

std::string format_system(const ConstraintSystem& system) {
    std::ostringstream out;
    for (int v : system.variables) {
        out << "var " << v;
        auto it = system.labels.find(v);
        if (it != system.labels.end()) out << " \"" << it->second << "\"";
        out << "\n";
    }
    for (const auto& h : system.hard) out << "hard " << h.to_string() << "\n";
    for (const auto& s : system.soft) out << "soft " << s.weight << " " << s.formula.to_string() << "\n";
    return out.str();
}

}  // namespace deepread
