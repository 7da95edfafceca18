// lexicon.hpp : words and multiword phrases -> senses, argument structure,
// selectional preferences; minimal inflectional morphology
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "deepread/kb.hpp"

namespace deepread {

// The closed tagset; PRPS prints as PRP$.
enum class Pos { DT, JJ, NN, NNP, NNS, VB, VBD, VBN, IN, RP, PRP, PRPS, CD, TO, RB };

std::string pos_name(Pos p);
std::optional<Pos> pos_from_name(const std::string& name);
bool is_noun(Pos p);
bool is_verb(Pos p);

enum class Inflect { Base, Plural, Past, PastParticiple, Progressive, ThirdSg };
std::string inflect_name(Inflect f);
std::optional<Inflect> inflect_from_name(const std::string& name);

struct PatternSlot {
    enum class Kind { Subject, Object, Object2, Prep, Particle, Clause, Adjective };
    Kind kind = Kind::Subject;
    std::string prep;   // preposition or particle word, when applicable
    std::string role;   // thematic role this slot maps to
    bool optional = false;
};

struct ArgPattern {
    ConceptId frame_type;
    std::vector<PatternSlot> slots;
};

struct SelectionalPref {
    std::string role;
    ConceptId preferred;
    double strength = 1.0;
};

struct Sense {
    ConceptId concept_id;
    std::vector<ArgPattern> patterns;
    std::vector<SelectionalPref> prefs;
    std::map<ConceptId, std::string> renderings;  // context concept -> surface override
};

struct LexEntry {
    std::string lemma;  // may contain spaces (multiword unit)
    Pos pos = Pos::NN;
    std::vector<Sense> senses;

    int token_count() const;
};

// One reading of a token span. Unknown tokens come back as a unit with
// unknown=true and a noun fallback tag.
struct LexUnit {
    int begin = 0;
    int end = 0;  // token range [begin, end)
    std::string surface;
    std::string lemma;
    Pos pos = Pos::NN;
    Inflect feature = Inflect::Base;
    bool unknown = false;
    const LexEntry* entry = nullptr;
};

class Lexicon {
public:
    const LexEntry* find(const std::string& lemma, Pos pos) const;
    const std::vector<LexEntry>& entries() const { return entries_; }

    // All readings of `surface` (one token): direct entries plus inflected
    // forms resolved through the irregular table and the regular rules.
    std::vector<LexUnit> readings(const std::string& surface) const;

    // Multiword entries starting with `first_word`, longest first.
    std::vector<const LexEntry*> multiwords_starting(const std::string& first_word) const;

    friend void merge_lexicon_text(Lexicon& lex, const std::string& text, const KnowledgeBase& kb,
                                   const std::string& file);
    friend std::string save_lexicon(const Lexicon& lex);

private:
    std::vector<LexEntry> entries_;
    std::map<std::pair<std::string, Pos>, int> by_key_;
    std::map<std::string, std::vector<int>> multiword_index_;            // first word -> entry index
    std::map<std::string, std::vector<std::pair<std::string, Inflect>>> irregular_;  // form -> (lemma, feature)
};

// Loads the lexicon; every referenced concept must exist in kb.
Lexicon load_lexicon(const std::string& path, const KnowledgeBase& kb);
Lexicon load_lexicon(const std::vector<std::string>& paths, const KnowledgeBase& kb);
Lexicon parse_lexicon(const std::string& text, const KnowledgeBase& kb, const std::string& file = "<string>");
std::string save_lexicon(const Lexicon& lex);

// Covers every token index with at least one unit. Longest (multiword)
// matches at a position are listed before shorter units starting there.
std::vector<LexUnit> lookup_units(const Lexicon& lex, const std::vector<std::string>& tokens);

std::vector<Sense> senses_of(const Lexicon& lex, const std::string& lemma, Pos pos);
const std::vector<ArgPattern>& patterns_for(const Sense& sense);

// Summed strength of preferences on `role` whose preferred concept the filler
// specializes. Throws on unknown filler concept.
double selectional_fit(const KnowledgeBase& kb, const Sense& sense, const std::string& role,
                       const ConceptId& filler);

std::string lowercase(std::string s);

}  // namespace deepread
