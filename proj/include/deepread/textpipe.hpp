// textpipe.hpp : sentence segmentation, textual-entity recognition,
// tokenization, and rule-based n-best part-of-speech tagging
#pragma once

#include <set>
#include <string>
#include <vector>

#include "deepread/lexicon.hpp"

namespace deepread {

struct TextEntity {
    enum class Kind { Word, Phrase, Time, Place, Name, Number, Price };
    Kind kind = Kind::Word;
    int begin = 0;
    int end = 0;  // character range [begin, end)
    std::string surface;
    std::string value;  // normalized payload, e.g. "1200 USD"
};

std::string entity_kind_name(TextEntity::Kind k);

struct Token {
    std::string surface;
    int begin = 0;
    int end = 0;  // character offsets into the sentence text
    bool punct = false;
    std::vector<std::pair<Pos, double>> tags;  // descending plausibility

    Pos best_tag() const { return tags.empty() ? Pos::NN : tags.front().first; }
};

// One contextual tagging rule; rules run in file order, left to right over
// the sentence, and move an available tag to the front of a token's list.
struct TagRule {
    std::string id;
    Pos prefer = Pos::NN;
    std::vector<Pos> prev_tags;           // any-of; empty = no condition
    std::vector<std::string> prev_lemmas; // any-of lemma of previous token
    std::vector<std::string> words;       // any-of surface (lowercased)
    bool at_end = false;                  // token is last word of the sentence
};

struct TextPipeData {
    std::vector<std::string> places;        // gazetteer entries, possibly multiword
    std::set<std::string> abbreviations;    // "mr.", "dr.", ... (lowercase, with period)
    std::set<std::string> time_words;       // "yesterday", "afternoon", ...
    std::vector<TagRule> tag_rules;

    // entities file: lines "place <words>", "abbrev <word>.", "time <word>";
    // tag rules file: (tagrule <id> (prefer <TAG>) (when ...conds)) forms.
    static TextPipeData load(const std::string& entities_path, const std::string& tag_rules_path);
};

class TextPipe {
public:
    TextPipe(const Lexicon& lex, TextPipeData data) : lex_(&lex), data_(std::move(data)) {}

    // Spans partition the non-whitespace text; '.' does not end a sentence
    // after a known abbreviation or a single-letter initial.
    std::vector<std::pair<int, int>> segment_sentences(const std::string& text) const;

    std::vector<Token> tokenize(const std::string& text) const;

    std::vector<TextEntity> recognize_entities(const std::string& text) const;

    // Fills tags in place, at most k per token; punctuation tokens are left
    // untagged. Unknown tokens not covered by an entity get a noun fallback.
    void tag_nbest(std::vector<Token>& tokens, const std::vector<TextEntity>& entities, int k) const;

    const Lexicon& lexicon() const { return *lex_; }
    const TextPipeData& data() const { return data_; }

private:
    const Lexicon* lex_;
    TextPipeData data_;
};

}  // namespace deepread
