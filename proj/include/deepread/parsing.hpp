// parsing.hpp : partial (chunk) parsing into fragments, semantic frame
// construction with one alternative per viable reading, and anaphor
// candidate generation
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "deepread/kb.hpp"
#include "deepread/lexicon.hpp"
#include "deepread/textpipe.hpp"

namespace deepread {

// One lexical unit of the chunker's input: a token, a multiword lexicon
// match, or a textual entity folded to a single unit.
struct TaggedUnit {
    int begin = 0;
    int end = 0;  // token range [begin, end)
    std::string surface;
    std::string lemma;
    Pos tag = Pos::NN;
    Inflect feature = Inflect::Base;
    const LexEntry* entry = nullptr;
    std::optional<TextEntity> entity;
    bool unknown = false;
    bool punct = false;
};

// Greedy unit segmentation: entities beat multiword lexicon matches beat
// single tokens; tags come from tag_nbest's best hypothesis.
std::vector<TaggedUnit> build_units(const TextPipe& pipe, const std::vector<Token>& tokens,
                                    const std::vector<TextEntity>& entities);

struct ParseFragment {
    enum class Label { S, NP, VP, PP, Clause, Unit };
    Label label = Label::Unit;
    std::vector<ParseFragment> children;
    int head = -1;   // unit index of the head
    int begin = 0;   // unit index range [begin, end)
    int end = 0;
    std::string prep;     // PP: preposition lemma
    bool passive = false; // VP
    int unit = -1;        // leaf unit index

    std::string bracket(const std::vector<TaggedUnit>& units) const;
};

using Parse = std::vector<ParseFragment>;  // fragments covering all units

struct ChunkResult {
    std::vector<Parse> alternatives;  // >= 1; first is the default attachment
    bool truncated = false;           // alternative cap hit
};

// Full-S parses when the grammar covers the sentence, otherwise maximal
// fragments. PP attachment ambiguity yields one alternative per site.
ChunkResult chunk_parse(const std::vector<TaggedUnit>& units, int max_alternatives = 8);

struct DiscourseEntity {
    std::string id;           // "milk1", "jim1", ...
    std::string head_lemma;   // lowercased head noun or name
    std::vector<ConceptId> concepts;  // candidate senses of the head
    std::string name;         // surface name for name entities
    bool person = false;
    bool plural = false;
    bool anaphor = false;     // placeholder awaiting settlement
    int sentence = 0;         // introduced at
    int last_mention = 0;
    int last_position = 0;    // unit index of last mention
    std::string last_role;    // "subject" | "object" | "other"

    std::string display() const { return name.empty() ? id : name; }
};

enum class AnaphorKind { Pronoun, Possessive, DefiniteNP, Name, Genitive };

struct Anaphor {
    std::string id;  // placeholder entity id
    AnaphorKind kind = AnaphorKind::Pronoun;
    int sentence = 0;
    int unit = -1;
    std::string surface;
    std::string head_lemma;
    bool plural = false;
    bool person_only = false;     // he/she/him...
    bool nonperson_only = false;  // it/its
};

class EntityRegistry {
public:
    // Creates a fresh entity named after the head lemma ("milk" -> milk1).
    DiscourseEntity& fresh(const std::string& head_lemma, int sentence);
    DiscourseEntity* find(const std::string& id);
    const DiscourseEntity* find(const std::string& id) const;
    const std::map<std::string, DiscourseEntity>& all() const { return entities_; }
    std::vector<const DiscourseEntity*> in_order() const;

private:
    std::map<std::string, DiscourseEntity> entities_;
    std::map<std::string, int> counters_;
    std::vector<std::string> order_;
};

struct RoleFiller {
    enum class Kind { Entity, SubFrame, Concept };
    Kind kind = Kind::Entity;
    std::string entity;  // entity id, or concept id for Kind::Concept
    int subframe = -1;

    std::string text() const {
        return kind == Kind::SubFrame ? "frame" + std::to_string(subframe) : entity;
    }
    bool operator==(const RoleFiller& o) const {
        return kind == o.kind && entity == o.entity && subframe == o.subframe;
    }
};

struct Frame {
    int id = 0;
    ConceptId frame_type;
    std::map<std::string, RoleFiller> roles;
    int sentence = 0;
    int begin = 0;  // token span of the verb unit
    int end = 0;
    int group = 0;           // alternative group: same verb occurrence
    std::string verb_lemma;
    ConceptId verb_sense;
    bool passive = false;
    double fit = 0;          // summed selectional fit over filled roles
    int parse_alt = 0;

    std::string dump(const EntityRegistry& reg) const;
};

struct SentenceAnalysis {
    int sentence = 0;
    std::string text;
    std::vector<Token> tokens;
    std::vector<TextEntity> entities;
    std::vector<TaggedUnit> units;
    ChunkResult chunks;
    std::vector<Frame> frames;       // all viable readings, grouped
    std::vector<Anaphor> anaphors;
    std::vector<std::string> introduced;  // fresh entity ids
    std::vector<int> unframed_verbs;      // unit indexes with no pattern match
    // copula readings: complement entity aliases the subject entity
    std::vector<std::pair<std::string, std::string>> aliases;
};

struct FrameCounters {
    int next_frame_id = 1;
};

// Builds frames over every chunk alternative; identical frames across
// alternatives are deduplicated. Introduces discourse entities for
// nonanaphoric NPs and collects anaphors (mutates registry).
void build_frames(const KnowledgeBase& kb, const Lexicon& lex, SentenceAnalysis& sa,
                  EntityRegistry& registry, FrameCounters& counters);

struct AnaphorCandidate {
    std::string anaphor_id;
    std::string entity;
    double salience = 0;
};

// Number/person/type-compatible prior entities, salience-scored
// (recency + grammatical-role bonus). Empty when nothing matches.
std::vector<AnaphorCandidate> anaphor_candidates(const KnowledgeBase& kb, const EntityRegistry& registry,
                                                 const Anaphor& anaphor);

}  // namespace deepread
