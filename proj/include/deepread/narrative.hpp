// narrative.hpp : discourse-level incremental interpretation — per-sentence
// ingestion, event merging, possibility pruning with reread recovery,
// and interpretation history
#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "deepread/agents.hpp"
#include "deepread/control.hpp"
#include "deepread/kb.hpp"
#include "deepread/lexicon.hpp"
#include "deepread/parsing.hpp"
#include "deepread/settle.hpp"
#include "deepread/textpipe.hpp"

namespace deepread {

struct NarrativeConfig {
    SolveConfig solver;
    Budget budget;
    int prune_horizon = 2;  // <= 0 disables pruning
    int max_parse_alternatives = 8;
    int max_forward_passes = 3;
    int tag_hypotheses = 3;  // k for the n-best tagger
};

struct PruneEntry {
    int sentence = 0;
    std::vector<int> dropped;
    std::string reason;
};

struct MergeHypothesis {
    int hyp = 0;       // the merge hypothesis id
    int new_frame = 0;
    int old_frame = 0;
    double weight = 0;
};

// Per-entity referent-category summary derived from the co-optimal
// interpretations ("category-of" hypotheses).
struct CategoryReport {
    std::string entity;
    std::vector<ConceptId> categories;  // true in at least one optimum
    bool indefinite = false;            // more than two categories co-optimal
};

class Discourse {
public:
    Discourse(const KnowledgeBase& kb, const Lexicon& lex, const TextPipe& pipe,
              const AgentEngine& engine, NarrativeConfig config);

    // Runs the full pipeline on one sentence and re-settles the live store.
    // An infeasible settlement triggers one reread; if that fails too the
    // discourse is marked confused (never a crash).
    void ingest_sentence(const std::string& text);

    // Restores the snapshot taken after sentence `from`-1 (1-based), revives
    // possibilities pruned at or after it, and re-ingests with pruning
    // disabled for one pass. Throws std::out_of_range on a bad index.
    void reread(int from_sentence);

    int sentences() const { return static_cast<int>(texts_.size()); }
    bool confused() const { return state_.confused; }
    bool feasible() const { return state_.interp.feasible; }

    const Interpretation& interpretation() const { return state_.interp; }
    const std::vector<std::vector<int>>& optima_true_sets() const { return state_.optima_true; }
    bool hyp_true(int id) const;
    bool hyp_true_in_any_optimum(int id) const;

    const HypothesisStore& hyps() const { return state_.hyps; }
    const ConstraintStore& constraints() const { return state_.constraints; }
    const EntityRegistry& registry() const { return state_.registry; }
    const std::vector<PruneEntry>& prune_log() const { return state_.prune_log; }
    const std::vector<MergeHypothesis>& merges() const { return merges_; }
    const std::vector<SentenceAnalysis>& analyses() const { return analyses_; }
    const std::vector<LogEntry>& last_log() const { return last_log_; }
    double settle_score() const { return state_.interp.score; }

    const KnowledgeBase& kb() const { return *kb_; }
    const Lexicon& lexicon() const { return *lex_; }
    const AgentEngine& engine() const { return *engine_; }
    const NarrativeConfig& config() const { return config_; }

    // Follows anaphor resolutions and copula aliases to the canonical entity.
    std::string chase(const std::string& id) const;
    // Human-readable form of an entity or concept argument.
    std::string render(const std::string& arg) const;

    std::vector<CategoryReport> category_report() const;

    // True hypotheses of a realm, sorted by id.
    std::vector<const Hypothesis*> true_hyps(const std::string& realm = "") const;

    // Versioned line-oriented snapshot of the live interpretation state.
    std::string dump_snapshot() const;

    // Deterministic digest of the full discourse state (tests use this to
    // show questions leave the discourse untouched).
    std::string state_digest() const;

    // Counterfactual support: settles a cloned system with extra hard
    // constraints; the discourse itself is untouched.
    struct CloneResult {
        bool feasible = false;
        Assignment truth;
        std::vector<int> newly_true;
    };

    friend class CounterfactualRunner;

private:
    struct State {
        HypothesisStore hyps;
        ConstraintStore constraints;
        EntityRegistry registry;
        std::map<std::string, std::string> resolution;  // anaphor/alias -> entity
        std::vector<std::pair<std::string, std::string>> aliases;  // copula identities
        FrameCounters counters;
        Interpretation interp;
        std::vector<std::vector<int>> optima_true;
        std::vector<PruneEntry> prune_log;
        double last_score = -1;
        bool confused = false;
    };

    void ingest_internal(const std::string& text, int sentence, bool allow_reread, bool prune_enabled);
    SentenceAnalysis analyze(const std::string& text, int sentence);
    void merge_events(const SentenceAnalysis& sa);
    bool settle();
    void apply_resolutions();
    void prune(int sentence);
    bool frame_gate_true(const Frame& f, const Assignment& truth) const;
    const Frame* find_frame(int id) const;

    const KnowledgeBase* kb_;
    const Lexicon* lex_;
    const TextPipe* pipe_;
    const AgentEngine* engine_;
    NarrativeConfig config_;

    State state_;
    std::vector<State> history_;  // history_[k] = state after sentence k; [0] = initial
    std::vector<std::string> texts_;
    std::vector<SentenceAnalysis> analyses_;
    std::vector<MergeHypothesis> merges_;
    std::vector<LogEntry> last_log_;
};

}  // namespace deepread
