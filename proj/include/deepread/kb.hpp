// kb.hpp : commonsense knowledge base — concepts, typed relational assertions
// with ako inheritance, and script records
#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace deepread {

using ConceptId = std::string;

enum class Relation {
    Ako,
    Isa,
    PartOf,
    MaterialOf,
    UsedFor,
    UsedAt,
    ColorOf,
    SizeOf,
    DurationOf,
    TypicalSubjectOf,
    TypicalObjectOf,
    Implies,
    Causes,
};

// Round-trips the file spelling ("ako", "part-of", ...).
std::string relation_name(Relation r);
std::optional<Relation> relation_from_name(const std::string& name);
bool relation_takes_magnitude(Relation r);

struct Magnitude {
    double value = 0;
    std::string unit;
    bool operator==(const Magnitude& o) const { return value == o.value && unit == o.unit; }
    bool operator<(const Magnitude& o) const {
        return value != o.value ? value < o.value : unit < o.unit;
    }
};

struct Assertion {
    Relation kind = Relation::Ako;
    ConceptId source;
    ConceptId target;
    std::optional<Magnitude> magnitude;

    auto key() const { return std::tie(kind, source, target, magnitude); }
    bool operator<(const Assertion& o) const { return key() < o.key(); }
    bool operator==(const Assertion& o) const { return key() == o.key(); }
};

struct Concept {
    ConceptId id;
    std::vector<std::string> names;
    std::string gloss;
    bool implicit = false;  // auto-created on first mention in an assertion

    // Display name: first declared name, else the id.
    const std::string& display() const;
};

struct ScriptEvent {
    int order = 0;
    std::string predicate;
    std::vector<std::string> role_refs;
};

struct ScriptTemplate {
    std::string predicate;
    std::vector<std::string> args;
};

struct Script {
    ConceptId id;
    std::vector<std::string> roles;
    std::vector<ScriptEvent> events;
    std::vector<ScriptTemplate> preconditions;
    std::vector<ScriptTemplate> postconditions;
};

struct QueryHit {
    ConceptId target;
    std::optional<Magnitude> magnitude;
    int distance = 0;  // ako edges between query source and asserting concept
};

class KnowledgeBase {
public:
    KnowledgeBase() = default;

    bool has_concept(const ConceptId& id) const { return concepts_.count(id) > 0; }
    const Concept& concept_of(const ConceptId& id) const;
    const std::map<ConceptId, Concept>& concepts() const { return concepts_; }
    const std::set<Assertion>& assertions() const { return assertions_; }
    const std::map<ConceptId, Script>& scripts() const { return scripts_; }

    // Direct targets plus targets inherited upward through ako; isa does not
    // inherit. Sorted lexicographically by target id. Throws on unknown id.
    std::vector<QueryHit> query(Relation kind, const ConceptId& source) const;

    // True iff sub reaches super through zero or more ako edges.
    bool specializes(const ConceptId& sub, const ConceptId& super) const;

    // sub plus all ako ancestors, in BFS order.
    std::vector<ConceptId> ancestors(const ConceptId& id) const;

    friend KnowledgeBase assert_fact(KnowledgeBase kb, const Assertion& a);
    friend void merge_kb_text(KnowledgeBase& kb, const std::string& text, const std::string& file);
    friend void add_script(KnowledgeBase& kb, Script script);

private:
    Concept& ensure_concept(const ConceptId& id, bool implicit);
    void check_no_ako_cycle(const ConceptId& source, const ConceptId& target) const;

    std::map<ConceptId, Concept> concepts_;
    std::set<Assertion> assertions_;
    std::map<ConceptId, std::vector<ConceptId>> ako_up_;  // concept -> direct ako parents
    std::map<std::pair<Relation, ConceptId>, std::vector<Assertion>> by_source_;
    std::map<ConceptId, Script> scripts_;
};

// Loads one file, or several merged in order. Duplicate assertions are
// deduplicated; concepts referenced before declaration are auto-created and
// flagged implicit. Throws ParseError / std::runtime_error.
KnowledgeBase load_kb(const std::string& path);
KnowledgeBase load_kb(const std::vector<std::string>& paths);
KnowledgeBase parse_kb(const std::string& text, const std::string& file = "<string>");

// Returns a new KB containing the assertion; idempotent for duplicates.
// Creates missing concepts. Throws if the assertion would create an ako cycle.
KnowledgeBase assert_fact(KnowledgeBase kb, const Assertion& a);

// Canonical text form; load(save(kb)) == kb.
std::string save_kb(const KnowledgeBase& kb);

}  // namespace deepread
