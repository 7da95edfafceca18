// qa.hpp : controlled-English / structured question parsing, baseline query
// dispatch, bounded counterfactual reasoning, causal-link explanations
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "deepread/narrative.hpp"

namespace deepread {

enum class QueryKind {
    HolderOf,
    LocationOf,
    GoalOf,
    Wanted,
    Feel,
    Liked,
    Transferred,
    ConcordConflict,
    Why,
    CounterfactualRemove,
};

std::string query_kind_name(QueryKind k);
std::optional<QueryKind> query_kind_from_name(const std::string& name);

struct QueryForm {
    QueryKind kind = QueryKind::HolderOf;
    std::vector<std::string> args;  // entity ids, predicate words, time points
};

struct Answer {
    enum class Status { Answered, Unknown, Unsupported };
    Status status = Status::Unknown;
    std::string payload;
    std::vector<int> support;          // hypothesis ids backing the answer
    std::vector<int> explanation;      // causal chain (cause ids, nearest first)
    std::vector<std::string> consequences;  // counterfactual: newly true propositions

    std::string text(const Discourse& d) const;
};

// Thrown when no template matches; lists the supported templates.
class UnparseableQuestion : public std::runtime_error {
public:
    explicit UnparseableQuestion(const std::string& what) : std::runtime_error(what) {}
};

// Controlled-English template match; structured s-expression syntax
// "(?holder-of $1200 end)" is always accepted. Entity references resolve
// against the discourse registry. Throws UnparseableQuestion.
QueryForm parse_question(const Discourse& d, const std::string& text);

// Baseline kinds dispatch to the owning realm; `why` walks causal links
// backward; unanswered baseline queries get one elaboration pass on a clone
// before returning unknown. Read-only on the discourse.
Answer answer_question(const Discourse& d, const QueryForm& form);

// Spec surface: baseline query against one realm; unsupported kinds for the
// realm come back Status::Unsupported.
Answer answer_baseline(const Discourse& d, const std::string& realm, const QueryForm& form);

// Clones the constraint system, forces the hypothesis false, re-runs the
// owning realm's rules and settlement on the clone, and reports newly-true
// consequences. The discourse is untouched. Throws if the hypothesis is
// missing or not true.
Answer counterfactual_remove(const Discourse& d, int hypothesis_id);

// Resolves "the money" / "Mr. Hug" / "$1,200" style references to an entity.
std::optional<std::string> resolve_entity_ref(const Discourse& d, const std::string& ref);

}  // namespace deepread
