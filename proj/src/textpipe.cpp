#include "deepread/textpipe.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "deepread/sexpr.hpp"

namespace deepread {

namespace {

bool is_word_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '\'';
}

bool is_cap(const std::string& s) {
    return !s.empty() && std::isupper(static_cast<unsigned char>(s[0]));
}

bool all_digits_commas(const std::string& s) {
    bool digit = false;
    for (char c : s) {
        if (std::isdigit(static_cast<unsigned char>(c))) digit = true;
        else if (c != ',' && c != '.') return false;
    }
    return digit;
}

const std::set<std::string> kUnits = {"inch",  "inches", "foot",  "feet",  "hour", "hours",
                                      "minute", "minutes", "year", "years", "pound", "pounds",
                                      "dollar", "dollars", "mile", "miles"};

}  // namespace

std::string entity_kind_name(TextEntity::Kind k) {
    switch (k) {
        case TextEntity::Kind::Word: return "word";
        case TextEntity::Kind::Phrase: return "phrase";
        case TextEntity::Kind::Time: return "time";
        case TextEntity::Kind::Place: return "place";
        case TextEntity::Kind::Name: return "name";
        case TextEntity::Kind::Number: return "number";
        case TextEntity::Kind::Price: return "price";
    }
    return "?";
}

TextPipeData TextPipeData::load(const std::string& entities_path, const std::string& tag_rules_path) {
    TextPipeData data;
    {
        std::istringstream in(read_text_file(entities_path));
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            lineno++;
            size_t comment = line.find('#');
            if (comment != std::string::npos) line = line.substr(0, comment);
            std::istringstream ls(line);
            std::string kind;
            if (!(ls >> kind)) continue;
            std::string rest;
            std::getline(ls, rest);
            size_t start = rest.find_first_not_of(" \t");
            rest = start == std::string::npos ? "" : rest.substr(start);
            if (rest.empty()) throw ParseError(entities_path, lineno, kind + " needs a payload");
            if (kind == "place") data.places.push_back(rest);
            else if (kind == "abbrev") data.abbreviations.insert(lowercase(rest));
            else if (kind == "time") data.time_words.insert(lowercase(rest));
            else throw ParseError(entities_path, lineno, "unknown entity kind '" + kind + "'");
        }
    }
    for (const Sexpr& form : parse_sexprs(read_text_file(tag_rules_path), tag_rules_path)) {
        if (form.head() != "tagrule" || form.size() < 3)
            throw ParseError(tag_rules_path, form.line, "expected (tagrule <id> (prefer TAG) (when ...))");
        TagRule rule;
        rule.id = form.at(1).str();
        for (size_t i = 2; i < form.size(); ++i) {
            const Sexpr& part = form.at(i);
            if (part.head() == "prefer" && part.size() == 2) {
                auto pos = pos_from_name(part.at(1).str());
                if (!pos) throw ParseError(tag_rules_path, part.line, "unknown tag " + part.at(1).str());
                rule.prefer = *pos;
            } else if (part.head() == "when") {
                for (size_t j = 1; j < part.size(); ++j) {
                    const Sexpr& cond = part.at(j);
                    const std::string& ch = cond.head();
                    if (ch == "prev-tag") {
                        for (size_t t = 1; t < cond.size(); ++t) {
                            auto pos = pos_from_name(cond.at(t).str());
                            if (!pos) throw ParseError(tag_rules_path, cond.line, "unknown tag " + cond.at(t).str());
                            rule.prev_tags.push_back(*pos);
                        }
                    } else if (ch == "prev-lemma") {
                        for (size_t t = 1; t < cond.size(); ++t)
                            rule.prev_lemmas.push_back(lowercase(cond.at(t).str()));
                    } else if (ch == "word") {
                        for (size_t t = 1; t < cond.size(); ++t)
                            rule.words.push_back(lowercase(cond.at(t).str()));
                    } else if (ch == "next-end") {
                        rule.at_end = true;
                    } else {
                        throw ParseError(tag_rules_path, cond.line, "unknown condition '" + ch + "'");
                    }
                }
            } else {
                throw ParseError(tag_rules_path, part.line, "unknown tagrule part");
            }
        }
        data.tag_rules.push_back(std::move(rule));
    }
    return data;
}

std::vector<Token> TextPipe::tokenize(const std::string& text) const {
    std::vector<Token> tokens;
    int i = 0;
    const int n = static_cast<int>(text.size());
    while (i < n) {
        char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            i++;
            continue;
        }
        int start = i;
        if (c == '$' && i + 1 < n && std::isdigit(static_cast<unsigned char>(text[i + 1]))) {
            i++;
            while (i < n && (std::isdigit(static_cast<unsigned char>(text[i])) || text[i] == ',' ||
                             (text[i] == '.' && i + 1 < n && std::isdigit(static_cast<unsigned char>(text[i + 1])))))
                i++;
        } else if (is_word_char(c)) {
            while (i < n && is_word_char(text[i])) i++;
            // hyphenated compounds stay one token: 61-year
            while (i < n && text[i] == '-' && i + 1 < n && is_word_char(text[i + 1])) {
                i++;
                while (i < n && is_word_char(text[i])) i++;
            }
            // keep the period on initials (J.) and known abbreviations (Mr.)
            if (i < n && text[i] == '.') {
                std::string word = text.substr(start, i - start);
                bool initial = word.size() == 1 && std::isupper(static_cast<unsigned char>(word[0]));
                if (initial || data_.abbreviations.count(lowercase(word) + ".")) i++;
            }
        } else {
            i++;  // punctuation, one char per token
        }
        Token t;
        t.surface = text.substr(start, i - start);
        t.begin = start;
        t.end = i;
        t.punct = !is_word_char(t.surface[0]) && t.surface[0] != '$';
        tokens.push_back(std::move(t));
    }
    return tokens;
}

std::vector<std::pair<int, int>> TextPipe::segment_sentences(const std::string& text) const {
    std::vector<std::pair<int, int>> spans;
    std::vector<Token> tokens = tokenize(text);
    if (tokens.empty()) return spans;

    size_t start_tok = 0;
    for (size_t i = 0; i < tokens.size(); ++i) {
        const std::string& s = tokens[i].surface;
        bool terminator = s == "." || s == "?" || s == "!";
        if (!terminator) continue;
        // Tokenization keeps the period attached to abbreviations and
        // initials, so any free-standing '.' token is sentence-final.
        while (i + 1 < tokens.size() &&
               (tokens[i + 1].surface == "." || tokens[i + 1].surface == "?" || tokens[i + 1].surface == "!"))
            i++;
        spans.emplace_back(tokens[start_tok].begin, tokens[i].end);
        start_tok = i + 1;
    }
    if (start_tok < tokens.size())
        spans.emplace_back(tokens[start_tok].begin, tokens.back().end);
    return spans;
}

std::vector<TextEntity> TextPipe::recognize_entities(const std::string& text) const {
    std::vector<Token> tokens = tokenize(text);
    std::vector<TextEntity> entities;
    std::vector<char> claimed(tokens.size(), 0);

    auto claim = [&](size_t from, size_t to, TextEntity::Kind kind, std::string value) {
        for (size_t i = from; i < to; ++i)
            if (claimed[i]) return;
        TextEntity e;
        e.kind = kind;
        e.begin = tokens[from].begin;
        e.end = tokens[to - 1].end;
        e.surface = text.substr(e.begin, e.end - e.begin);
        e.value = std::move(value);
        entities.push_back(std::move(e));
        for (size_t i = from; i < to; ++i) claimed[i] = 1;
    };

    // prices and numbers (with units) first
    for (size_t i = 0; i < tokens.size(); ++i) {
        const std::string& s = tokens[i].surface;
        if (s.size() > 1 && s[0] == '$') {
            std::string digits;
            for (char c : s.substr(1))
                if (c != ',') digits.push_back(c);
            claim(i, i + 1, TextEntity::Kind::Price, digits + " USD");
        } else if (all_digits_commas(s) && !s.empty() && std::isdigit(static_cast<unsigned char>(s[0]))) {
            std::string digits;
            for (char c : s)
                if (c != ',') digits.push_back(c);
            if (i + 1 < tokens.size() && kUnits.count(lowercase(tokens[i + 1].surface)))
                claim(i, i + 2, TextEntity::Kind::Number, digits + " " + lowercase(tokens[i + 1].surface));
            else
                claim(i, i + 1, TextEntity::Kind::Number, digits);
        }
    }

    // gazetteer places, longest entry first
    std::vector<std::vector<std::string>> gaz;
    for (const auto& place : data_.places) {
        std::istringstream ss(place);
        std::vector<std::string> words;
        std::string w;
        while (ss >> w) words.push_back(lowercase(w));
        gaz.push_back(std::move(words));
    }
    std::sort(gaz.begin(), gaz.end(),
              [](const auto& a, const auto& b) { return a.size() != b.size() ? a.size() > b.size() : a < b; });
    for (const auto& place : gaz) {
        for (size_t i = 0; i + place.size() <= tokens.size(); ++i) {
            bool match = true;
            for (size_t j = 0; j < place.size(); ++j)
                if (lowercase(tokens[i + j].surface) != place[j]) {
                    match = false;
                    break;
                }
            if (!match) continue;
            std::string value;
            for (size_t j = 0; j < place.size(); ++j) {
                if (j) value += " ";
                value += place[j];
            }
            claim(i, i + place.size(), TextEntity::Kind::Place, value);
        }
    }

    // names: runs of capitalized tokens/initials unknown to the lexicon
    for (size_t i = 0; i < tokens.size(); ++i) {
        if (claimed[i] || tokens[i].punct || !is_cap(tokens[i].surface)) continue;
        if (!lex_->readings(tokens[i].surface).empty()) continue;
        size_t j = i;
        while (j < tokens.size() && !claimed[j] && !tokens[j].punct && is_cap(tokens[j].surface)) {
            bool initial = tokens[j].surface.size() == 2 && tokens[j].surface[1] == '.';
            if (!initial && !lex_->readings(tokens[j].surface).empty() && j > i) break;
            j++;
        }
        std::string value;
        for (size_t t = i; t < j; ++t) {
            if (t > i) value += " ";
            value += tokens[t].surface;
        }
        claim(i, j, TextEntity::Kind::Name, value);
        i = j - 1;
    }

    // time words
    for (size_t i = 0; i < tokens.size(); ++i)
        if (!claimed[i] && data_.time_words.count(lowercase(tokens[i].surface)))
            claim(i, i + 1, TextEntity::Kind::Time, lowercase(tokens[i].surface));

    std::sort(entities.begin(), entities.end(),
              [](const TextEntity& a, const TextEntity& b) { return a.begin < b.begin; });
    return entities;
}

void TextPipe::tag_nbest(std::vector<Token>& tokens, const std::vector<TextEntity>& entities, int k) const {
    if (k < 1) throw std::runtime_error("tag_nbest: k must be >= 1");

    auto entity_at = [&](const Token& t) -> const TextEntity* {
        for (const auto& e : entities)
            if (t.begin >= e.begin && t.end <= e.end) return &e;
        return nullptr;
    };

    // initial hypotheses from the lexicon (file order = priority)
    for (auto& t : tokens) {
        t.tags.clear();
        if (t.punct) continue;
        const TextEntity* ent = entity_at(t);
        if (ent && (ent->kind == TextEntity::Kind::Price || ent->kind == TextEntity::Kind::Number) &&
            (t.surface[0] == '$' || std::isdigit(static_cast<unsigned char>(t.surface[0])))) {
            t.tags.emplace_back(Pos::CD, 1.0);
            continue;
        }
        std::vector<LexUnit> readings = lex_->readings(t.surface);
        for (const auto& r : readings) {
            bool seen = false;
            for (const auto& [pos, w] : t.tags)
                if (pos == r.pos) seen = true;
            if (!seen) t.tags.emplace_back(r.pos, 1.0 / (1.0 + t.tags.size()));
        }
        if (t.tags.empty()) {
            // unknown word guessers
            Pos guess = Pos::NN;
            if (ent && ent->kind == TextEntity::Kind::Name) guess = Pos::NNP;
            else if (all_digits_commas(t.surface) && std::isdigit(static_cast<unsigned char>(t.surface[0]))) guess = Pos::CD;
            else if (t.surface.find('-') != std::string::npos &&
                     std::isdigit(static_cast<unsigned char>(t.surface[0]))) guess = Pos::JJ;
            else if (is_cap(t.surface)) guess = Pos::NNP;
            t.tags.emplace_back(guess, 1.0);
        }
    }

    // contextual rules, left to right; earlier tokens' final tags feed later ones
    int last_word = -1;
    for (int i = static_cast<int>(tokens.size()) - 1; i >= 0; --i)
        if (!tokens[i].punct) {
            last_word = i;
            break;
        }
    for (size_t i = 0; i < tokens.size(); ++i) {
        Token& t = tokens[i];
        if (t.punct || t.tags.size() < 1) continue;
        const Token* prev = nullptr;
        for (int j = static_cast<int>(i) - 1; j >= 0; --j)
            if (!tokens[j].punct) {
                prev = &tokens[j];
                break;
            }
        for (const auto& rule : data_.tag_rules) {
            size_t have = t.tags.size();
            size_t at = have;
            for (size_t x = 0; x < have; ++x)
                if (t.tags[x].first == rule.prefer) at = x;
            if (at == have || at == 0) continue;  // tag unavailable or already first
            if (!rule.words.empty() &&
                std::find(rule.words.begin(), rule.words.end(), lowercase(t.surface)) == rule.words.end())
                continue;
            if (rule.at_end && static_cast<int>(i) != last_word) continue;
            if (!rule.prev_tags.empty()) {
                if (!prev || prev->tags.empty()) continue;
                if (std::find(rule.prev_tags.begin(), rule.prev_tags.end(), prev->best_tag()) ==
                    rule.prev_tags.end())
                    continue;
            }
            if (!rule.prev_lemmas.empty()) {
                if (!prev) continue;
                bool hit = false;
                for (const auto& r : lex_->readings(prev->surface))
                    if (r.pos == prev->best_tag() &&
                        std::find(rule.prev_lemmas.begin(), rule.prev_lemmas.end(), r.lemma) !=
                            rule.prev_lemmas.end())
                        hit = true;
                if (!hit) continue;
            }
            std::rotate(t.tags.begin(), t.tags.begin() + at, t.tags.begin() + at + 1);
        }
        if (static_cast<int>(t.tags.size()) > k) t.tags.resize(k);
        for (size_t r = 0; r < t.tags.size(); ++r) t.tags[r].second = 1.0 / (1.0 + r);
    }
}

}  // namespace deepread
