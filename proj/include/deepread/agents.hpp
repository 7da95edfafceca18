// agents.hpp : understanding-agent framework — realm agents turn frames into
// hypotheses, hard/soft constraints and causal links over a shared pool
#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "deepread/kb.hpp"
#include "deepread/lexicon.hpp"
#include "deepread/parsing.hpp"
#include "deepread/settle.hpp"

namespace deepread {

struct Realm {
    std::string id;
    bool per_person = false;  // emotion/need-goal/personal instantiate per person
};

// The nine built-in realms plus the engine's own pseudo-realms for lexical
// choice bookkeeping (lexical, reference, parse).
std::vector<Realm> builtin_realms();

enum class HypKind { SenseChoice, ReferentChoice, AttachmentChoice, Event, State, Goal, Merge };
std::string hyp_kind_name(HypKind k);
std::optional<HypKind> hyp_kind_from_name(const std::string& name);

struct Proposition {
    std::string predicate;
    std::vector<std::string> args;

    std::string text() const;
    bool operator==(const Proposition& o) const { return predicate == o.predicate && args == o.args; }
};

struct Hypothesis {
    int id = 0;
    std::string realm;
    std::string instance;  // entity id for per-person realms, else ""
    HypKind kind = HypKind::Event;
    Proposition prop;
    std::string rule;      // provenance ("" for engine-emitted choices)
    int sentence = 0;      // first proposed at
    bool retired = false;
    int false_streak = 0;  // consecutive sentences false in every optimum
};

struct CausalLink {
    int cause = 0;
    int effect = 0;
    std::string rule;

    bool operator==(const CausalLink& o) const {
        return cause == o.cause && effect == o.effect && rule == o.rule;
    }
};

class HypothesisStore {
public:
    // Returns the id; a hypothesis with the same (realm, proposition) keeps
    // its original id (deduplication is total, ids stable).
    int propose(const std::string& realm, const std::string& instance, HypKind kind,
                Proposition prop, const std::string& rule, int sentence);

    const Hypothesis* find(int id) const;
    Hypothesis* find(int id);
    const Hypothesis* find_prop(const std::string& realm, const Proposition& prop) const;
    // Any live hypothesis with this proposition, realm ignored.
    const Hypothesis* find_prop_any(const Proposition& prop) const;
    const std::vector<Hypothesis>& all() const { return hyps_; }
    std::vector<const Hypothesis*> live() const;
    int size() const { return static_cast<int>(hyps_.size()); }

    void retire(int id);
    void restore(int id);

private:
    std::vector<Hypothesis> hyps_;
    std::map<std::string, int> by_key_;
    int next_id_ = 1;
};

struct StoredConstraint {
    int id = 0;
    bool hard = false;
    double weight = 1.0;
    Formula formula;
    std::string rule;
    std::string key;  // dedup key
};

class ConstraintStore {
public:
    // Adds unless an identical key exists; returns the constraint id.
    int add_hard(Formula f, const std::string& rule, const std::string& key);
    int add_soft(double weight, Formula f, const std::string& rule, const std::string& key);
    // Named exactly-one groups; members accrue over sentences and the xor is
    // regenerated from live membership at settlement time.
    void add_to_group(const std::string& group, int hyp_id);

    void add_link(const HypothesisStore& hyps, int cause, int effect, const std::string& rule);

    const std::vector<StoredConstraint>& constraints() const { return constraints_; }
    const std::map<std::string, std::vector<int>>& groups() const { return groups_; }
    const std::vector<CausalLink>& links() const { return links_; }

private:
    std::vector<StoredConstraint> constraints_;
    std::map<std::string, std::vector<int>> groups_;
    std::set<std::string> keys_;
    std::vector<CausalLink> links_;
    int next_id_ = 1;
};

// Builds the weighted MAX-SAT system over live hypotheses: one xor per
// nonempty group, every stored formula, and hard not(h) per retired h.
ConstraintSystem build_system(const HypothesisStore& hyps, const ConstraintStore& constraints);

// ---------------------------------------------------------------------------
// Rule language
//
//   (rule <realm> <id>
//     (when (frame <type> (role <r> ?v)...) (word "w") (sense "w" <concept>)
//           (entity <concept> ?v) (head ?v "w") (topic ?v)
//           (hyp-true (<pred> <arg>...)) (hyp-false (<pred> <arg>...)))
//     (hyp <label> <kind> (<pred> <arg>...))...
//     (soft <weight> <formula>)... (hard <formula>)...
//     (group <name> <atom>...)...
//     (because <effect-atom> <cause-atom>)...)
//
// Formula atoms: labels, (sense "w" <concept>), (hyp (<pred> <arg>...)).

struct RuleCond {
    enum class Kind { Frame, Word, Sense, Entity, Head, Topic, HypTrue, HypFalse };
    Kind kind = Kind::Word;
    std::string a, b;                               // word / lemma / concept / var
    std::vector<std::pair<std::string, std::string>> roles;  // frame: (role, var-or-atom)
    Proposition prop;                               // hyp-true/false template
};

struct RuleFormula {
    enum class Kind { Label, Sense, Hyp, And, Or, Xor, Not };
    Kind kind = Kind::Label;
    std::string label;
    std::string lemma, concept_id;  // sense ref
    Proposition prop;               // hyp ref template
    std::vector<RuleFormula> children;
};

struct RuleHyp {
    std::string label;
    HypKind kind = HypKind::Event;
    Proposition prop;
};

struct AgentRule {
    std::string realm;
    std::string id;
    std::vector<RuleCond> conds;
    std::vector<RuleHyp> hyps;
    std::vector<std::pair<double, RuleFormula>> soft;
    std::vector<RuleFormula> hard;
    std::vector<std::pair<std::string, std::vector<RuleFormula>>> groups;
    std::vector<std::pair<RuleFormula, RuleFormula>> because;  // (effect, cause)
};

struct UAReport {
    std::string realm;
    std::vector<int> hypotheses;
    std::vector<int> constraints;
    std::vector<CausalLink> links;
};

// Everything a propose pass reads and writes.
struct ProposeContext {
    const KnowledgeBase* kb = nullptr;
    const Lexicon* lex = nullptr;
    const SentenceAnalysis* sa = nullptr;
    EntityRegistry* registry = nullptr;
    HypothesisStore* hyps = nullptr;
    ConstraintStore* constraints = nullptr;
    const Assignment* truth = nullptr;  // current interpretation, may be null
    std::function<std::string(const std::string&)> chase;  // entity canonicalization
    int sentence = 0;
};

class AgentEngine {
public:
    void register_realm(Realm realm);
    const std::vector<Realm>& realms() const { return realms_; }
    const Realm* find_realm(const std::string& id) const;

    void load_rules(const std::string& path);
    void parse_rules(const std::string& text, const std::string& file = "<string>");
    const std::vector<AgentRule>& rules() const { return rules_; }

    // Engine-level choice hypotheses for the current sentence: word senses,
    // anaphor referents, attachment readings, selectional-fit weights.
    void emit_lexical_choices(ProposeContext& ctx) const;

    // Runs every realm's rules (sorted by realm then rule id); returns one
    // report per realm that produced anything.
    std::vector<UAReport> propose_all(ProposeContext& ctx) const;
    UAReport propose_realm(const std::string& realm_id, ProposeContext& ctx) const;

    // Realm instances seen in the store (per-person realms only).
    std::vector<std::string> instances_of(const HypothesisStore& hyps, const std::string& realm) const;

private:
    std::vector<Realm> realms_;
    std::vector<AgentRule> rules_;
};

}  // namespace deepread
