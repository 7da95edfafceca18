#include "deepread/lexicon.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "deepread/sexpr.hpp"

namespace deepread {

namespace {

const std::pair<Pos, const char*> kPosNames[] = {
    {Pos::DT, "DT"},   {Pos::JJ, "JJ"},   {Pos::NN, "NN"},   {Pos::NNP, "NNP"}, {Pos::NNS, "NNS"},
    {Pos::VB, "VB"},   {Pos::VBD, "VBD"}, {Pos::VBN, "VBN"}, {Pos::IN, "IN"},   {Pos::RP, "RP"},
    {Pos::PRP, "PRP"}, {Pos::PRPS, "PRP$"}, {Pos::CD, "CD"}, {Pos::TO, "TO"},   {Pos::RB, "RB"},
};

const std::pair<Inflect, const char*> kInflectNames[] = {
    {Inflect::Base, "base"},
    {Inflect::Plural, "plural"},
    {Inflect::Past, "past"},
    {Inflect::PastParticiple, "past-participle"},
    {Inflect::Progressive, "progressive"},
    {Inflect::ThirdSg, "3sg"},
};

}  // namespace

std::string pos_name(Pos p) {
    for (const auto& [pos, name] : kPosNames)
        if (pos == p) return name;
    return "?";
}

std::optional<Pos> pos_from_name(const std::string& name) {
    for (const auto& [pos, pname] : kPosNames)
        if (name == pname) return pos;
    return std::nullopt;
}

bool is_noun(Pos p) { return p == Pos::NN || p == Pos::NNS || p == Pos::NNP; }
bool is_verb(Pos p) { return p == Pos::VB || p == Pos::VBD || p == Pos::VBN; }

std::string inflect_name(Inflect f) {
    for (const auto& [in, name] : kInflectNames)
        if (in == f) return name;
    return "?";
}

std::optional<Inflect> inflect_from_name(const std::string& name) {
    for (const auto& [in, iname] : kInflectNames)
        if (name == iname) return in;
    return std::nullopt;
}

std::string lowercase(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

int LexEntry::token_count() const {
    return 1 + static_cast<int>(std::count(lemma.begin(), lemma.end(), ' '));
}

const LexEntry* Lexicon::find(const std::string& lemma, Pos pos) const {
    auto it = by_key_.find({lemma, pos});
    return it == by_key_.end() ? nullptr : &entries_[it->second];
}

std::vector<const LexEntry*> Lexicon::multiwords_starting(const std::string& first_word) const {
    std::vector<const LexEntry*> out;
    auto it = multiword_index_.find(first_word);
    if (it == multiword_index_.end()) return out;
    for (int idx : it->second) out.push_back(&entries_[idx]);
    std::sort(out.begin(), out.end(), [](const LexEntry* a, const LexEntry* b) {
        return a->token_count() != b->token_count() ? a->token_count() > b->token_count()
                                                    : a->lemma < b->lemma;
    });
    return out;
}

namespace {

// Regular inflection: candidate (lemma, feature) pairs for a surface form.
// A candidate is real only if the lexicon has a matching entry.
struct MorphCandidate {
    std::string lemma;
    Inflect feature;
    bool noun_only;  // plural applies to nouns, the rest to verbs
};

std::vector<MorphCandidate> regular_morphs(const std::string& w) {
    std::vector<MorphCandidate> out;
    size_t n = w.size();
    auto add = [&](std::string lemma, Inflect f, bool noun) {
        out.push_back({std::move(lemma), f, noun});
    };
    if (n > 3 && w.ends_with("ies")) {
        add(w.substr(0, n - 3) + "y", Inflect::Plural, true);
        add(w.substr(0, n - 3) + "y", Inflect::ThirdSg, false);
    }
    if (n > 2 && w.ends_with("es")) {
        add(w.substr(0, n - 2), Inflect::Plural, true);
        add(w.substr(0, n - 2), Inflect::ThirdSg, false);
    }
    if (n > 1 && w.ends_with("s") && !w.ends_with("ss")) {
        add(w.substr(0, n - 1), Inflect::Plural, true);
        add(w.substr(0, n - 1), Inflect::ThirdSg, false);
    }
    if (n > 2 && w.ends_with("ed")) {
        std::string stem = w.substr(0, n - 2);
        for (Inflect f : {Inflect::Past, Inflect::PastParticiple}) {
            add(stem, f, false);
            add(stem + "e", f, false);  // decided -> decide
            if (stem.size() >= 2 && stem[stem.size() - 1] == stem[stem.size() - 2])
                add(stem.substr(0, stem.size() - 1), f, false);  // rubbed -> rub
        }
    }
    if (n > 4 && w.ends_with("ing")) {
        std::string stem = w.substr(0, n - 3);
        add(stem, Inflect::Progressive, false);
        add(stem + "e", Inflect::Progressive, false);  // biting -> bite
        if (stem.size() >= 2 && stem[stem.size() - 1] == stem[stem.size() - 2])
            add(stem.substr(0, stem.size() - 1), Inflect::Progressive, false);
    }
    return out;
}

Pos inflected_pos(Pos base, Inflect f) {
    switch (f) {
        case Inflect::Plural:
            return Pos::NNS;
        case Inflect::Past:
            return Pos::VBD;
        case Inflect::PastParticiple:
            return Pos::VBN;
        default:
            return base;
    }
}

}  // namespace

std::vector<LexUnit> Lexicon::readings(const std::string& surface) const {
    std::string w = lowercase(surface);
    std::vector<LexUnit> out;
    auto push = [&](const LexEntry& e, Inflect f) {
        LexUnit u;
        u.surface = surface;
        u.lemma = e.lemma;
        u.pos = inflected_pos(e.pos, f);
        u.feature = f;
        u.entry = &e;
        for (const auto& prev : out)
            if (prev.entry == u.entry && prev.pos == u.pos && prev.feature == u.feature) return;
        out.push_back(std::move(u));
    };

    for (const auto& e : entries_)
        if (e.lemma == w && e.token_count() == 1) push(e, Inflect::Base);

    auto irr = irregular_.find(w);
    if (irr != irregular_.end()) {
        for (const auto& [lemma, feature] : irr->second) {
            bool want_noun = feature == Inflect::Plural;
            bool want_verb = feature == Inflect::Past || feature == Inflect::PastParticiple ||
                             feature == Inflect::Progressive || feature == Inflect::ThirdSg;
            for (const auto& e : entries_) {
                if (e.lemma != lemma || e.token_count() != 1) continue;
                if (want_noun && !is_noun(e.pos)) continue;
                if (want_verb && !is_verb(e.pos)) continue;
                push(e, feature);
            }
        }
    }

    for (const auto& m : regular_morphs(w)) {
        for (const auto& e : entries_) {
            if (e.lemma != m.lemma || e.token_count() != 1) continue;
            if (m.noun_only && e.pos != Pos::NN) continue;
            if (!m.noun_only && e.pos != Pos::VB) continue;
            push(e, m.feature);
        }
    }
    return out;
}

std::vector<LexUnit> lookup_units(const Lexicon& lex, const std::vector<std::string>& tokens) {
    std::vector<LexUnit> units;
    for (int i = 0; i < static_cast<int>(tokens.size()); ++i) {
        std::string w = lowercase(tokens[i]);

        // longest multiword match first
        for (const LexEntry* mw : lex.multiwords_starting(w)) {
            int n = mw->token_count();
            if (i + n > static_cast<int>(tokens.size())) continue;
            std::istringstream parts(mw->lemma);
            std::string part;
            bool match = true;
            int j = i;
            while (parts >> part) {
                if (lowercase(tokens[j]) != part) {
                    match = false;
                    break;
                }
                j++;
            }
            if (!match) continue;
            LexUnit u;
            u.begin = i;
            u.end = i + n;
            for (int t = i; t < i + n; ++t) {
                if (t > i) u.surface += " ";
                u.surface += tokens[t];
            }
            u.lemma = mw->lemma;
            u.pos = mw->pos;
            u.entry = mw;
            units.push_back(std::move(u));
        }

        std::vector<LexUnit> singles = lex.readings(tokens[i]);
        if (singles.empty()) {
            LexUnit u;
            u.begin = i;
            u.end = i + 1;
            u.surface = tokens[i];
            u.unknown = true;  // noun fallback; the tagger refines this
            u.pos = Pos::NN;
            units.push_back(std::move(u));
        } else {
            for (auto& u : singles) {
                u.begin = i;
                u.end = i + 1;
                units.push_back(std::move(u));
            }
        }
    }
    return units;
}

std::vector<Sense> senses_of(const Lexicon& lex, const std::string& lemma, Pos pos) {
    const LexEntry* e = lex.find(lemma, pos);
    return e ? e->senses : std::vector<Sense>{};
}

const std::vector<ArgPattern>& patterns_for(const Sense& sense) {
    return sense.patterns;
}

double selectional_fit(const KnowledgeBase& kb, const Sense& sense, const std::string& role,
                       const ConceptId& filler) {
    if (!kb.has_concept(filler)) throw std::runtime_error("unknown concept: " + filler);
    double fit = 0;
    for (const auto& p : sense.prefs)
        if (p.role == role && kb.specializes(filler, p.preferred)) fit += p.strength;
    return fit;
}

namespace {

PatternSlot parse_slot(const Sexpr& form, const std::string& file) {
    PatternSlot slot;
    const std::string& head = form.head();
    size_t i = 1;
    if (head == "subject") slot.kind = PatternSlot::Kind::Subject;
    else if (head == "object") slot.kind = PatternSlot::Kind::Object;
    else if (head == "object2") slot.kind = PatternSlot::Kind::Object2;
    else if (head == "prep") slot.kind = PatternSlot::Kind::Prep;
    else if (head == "particle") slot.kind = PatternSlot::Kind::Particle;
    else if (head == "clause") slot.kind = PatternSlot::Kind::Clause;
    else if (head == "adjective") slot.kind = PatternSlot::Kind::Adjective;
    else throw ParseError(file, form.line, "unknown pattern slot '" + head + "'");
    if (slot.kind == PatternSlot::Kind::Prep || slot.kind == PatternSlot::Kind::Particle) {
        if (form.size() < 2 || !form.at(1).is_string())
            throw ParseError(file, form.line, head + " slot needs its word as a string");
        slot.prep = form.at(1).text;
        i = 2;
    }
    if (i < form.size() && form.at(i).is_atom() && form.at(i).text != "opt") {
        slot.role = form.at(i).text;
        i++;
    }
    if (i < form.size() && form.at(i).is_atom() && form.at(i).text == "opt") {
        slot.optional = true;
        i++;
    }
    if (i != form.size()) throw ParseError(file, form.line, "trailing items in pattern slot");
    if (slot.role.empty() && slot.kind != PatternSlot::Kind::Particle)
        throw ParseError(file, form.line, head + " slot needs a thematic role");
    return slot;
}

Sense parse_sense(const Sexpr& form, const KnowledgeBase& kb, const std::string& file) {
    if (form.size() < 2) throw ParseError(file, form.line, "sense needs a concept id");
    Sense sense;
    sense.concept_id = form.at(1).str();
    if (!kb.has_concept(sense.concept_id))
        throw ParseError(file, form.line, "unknown concept: " + sense.concept_id);
    for (size_t i = 2; i < form.size(); ++i) {
        const Sexpr& part = form.at(i);
        const std::string& head = part.head();
        if (head == "pattern") {
            if (part.size() < 2) throw ParseError(file, part.line, "pattern needs a frame type");
            ArgPattern pattern;
            pattern.frame_type = part.at(1).str();
            if (!kb.has_concept(pattern.frame_type))
                throw ParseError(file, part.line, "unknown concept: " + pattern.frame_type);
            for (size_t j = 2; j < part.size(); ++j)
                pattern.slots.push_back(parse_slot(part.at(j), file));
            sense.patterns.push_back(std::move(pattern));
        } else if (head == "prefer") {
            if (part.size() != 4) throw ParseError(file, part.line, "prefer takes role, concept, strength");
            SelectionalPref pref;
            pref.role = part.at(1).str();
            pref.preferred = part.at(2).str();
            pref.strength = part.at(3).num();
            if (!kb.has_concept(pref.preferred))
                throw ParseError(file, part.line, "unknown concept: " + pref.preferred);
            if (!(pref.strength > 0)) throw ParseError(file, part.line, "preference strength must be > 0");
            sense.prefs.push_back(std::move(pref));
        } else if (head == "render") {
            if (part.size() != 3) throw ParseError(file, part.line, "render takes concept and surface");
            if (!kb.has_concept(part.at(1).str()))
                throw ParseError(file, part.line, "unknown concept: " + part.at(1).str());
            sense.renderings[part.at(1).str()] = part.at(2).str();
        } else {
            throw ParseError(file, part.line, "unknown sense part '" + head + "'");
        }
    }
    return sense;
}

}  // namespace

Lexicon parse_lexicon(const std::string& text, const KnowledgeBase& kb, const std::string& file) {
    Lexicon lex;
    merge_lexicon_text(lex, text, kb, file);
    return lex;
}

void merge_lexicon_text(Lexicon& lex, const std::string& text, const KnowledgeBase& kb,
                        const std::string& file) {
    for (const Sexpr& form : parse_sexprs(text, file)) {
        const std::string& head = form.head();
        if (head == "lex") {
            if (form.size() < 3) throw ParseError(file, form.line, "lex needs lemma and pos");
            LexEntry entry;
            entry.lemma = lowercase(form.at(1).str());
            auto pos = pos_from_name(form.at(2).str());
            if (!pos) throw ParseError(file, form.line, "unknown pos '" + form.at(2).str() + "'");
            entry.pos = *pos;
            for (size_t i = 3; i < form.size(); ++i) {
                if (form.at(i).head() != "sense")
                    throw ParseError(file, form.at(i).line, "expected (sense ...)");
                entry.senses.push_back(parse_sense(form.at(i), kb, file));
            }
            if (entry.senses.empty())
                throw ParseError(file, form.line, "entry '" + entry.lemma + "' has no senses");
            for (const auto& s : entry.senses) {
                if (is_verb(entry.pos) && s.patterns.empty())
                    throw ParseError(file, form.line,
                                     "verb sense " + s.concept_id + " of '" + entry.lemma + "' has no pattern");
                if (!is_verb(entry.pos) && !s.patterns.empty())
                    throw ParseError(file, form.line,
                                     "non-verb sense " + s.concept_id + " of '" + entry.lemma + "' has patterns");
            }
            if (lex.by_key_.count({entry.lemma, entry.pos}))
                throw ParseError(file, form.line,
                                 "duplicate entry (" + entry.lemma + ", " + pos_name(entry.pos) + ")");
            int idx = static_cast<int>(lex.entries_.size());
            lex.by_key_[{entry.lemma, entry.pos}] = idx;
            if (entry.token_count() > 1) {
                std::string first = entry.lemma.substr(0, entry.lemma.find(' '));
                lex.multiword_index_[first].push_back(idx);
            }
            lex.entries_.push_back(std::move(entry));
        } else if (head == "inflect") {
            if (form.size() != 4) throw ParseError(file, form.line, "inflect takes form, lemma, feature");
            auto feature = inflect_from_name(form.at(3).str());
            if (!feature) throw ParseError(file, form.line, "unknown feature '" + form.at(3).str() + "'");
            lex.irregular_[lowercase(form.at(1).str())].push_back(
                {lowercase(form.at(2).str()), *feature});
        } else {
            throw ParseError(file, form.line, "unknown form '" + head + "'");
        }
    }
}

Lexicon load_lexicon(const std::string& path, const KnowledgeBase& kb) {
    return parse_lexicon(read_text_file(path), kb, path);
}

Lexicon load_lexicon(const std::vector<std::string>& paths, const KnowledgeBase& kb) {
    Lexicon lex;
    for (const auto& p : paths) merge_lexicon_text(lex, read_text_file(p), kb, p);
    return lex;
}

std::string save_lexicon(const Lexicon& lex) {
    std::ostringstream out;
    for (const auto& e : lex.entries_) {
        out << "(lex \"" << e.lemma << "\" " << pos_name(e.pos);
        for (const auto& s : e.senses) {
            out << " (sense " << s.concept_id;
            for (const auto& p : s.patterns) {
                out << " (pattern " << p.frame_type;
                for (const auto& slot : p.slots) {
                    out << " (";
                    switch (slot.kind) {
                        case PatternSlot::Kind::Subject: out << "subject"; break;
                        case PatternSlot::Kind::Object: out << "object"; break;
                        case PatternSlot::Kind::Object2: out << "object2"; break;
                        case PatternSlot::Kind::Prep: out << "prep \"" << slot.prep << "\""; break;
                        case PatternSlot::Kind::Particle: out << "particle \"" << slot.prep << "\""; break;
                        case PatternSlot::Kind::Clause: out << "clause"; break;
                        case PatternSlot::Kind::Adjective: out << "adjective"; break;
                    }
                    if (!slot.role.empty()) out << " " << slot.role;
                    if (slot.optional) out << " opt";
                    out << ")";
                }
                out << ")";
            }
            for (const auto& pref : s.prefs)
                out << " (prefer " << pref.role << " " << pref.preferred << " " << pref.strength << ")";
            for (const auto& [ctx, surface] : s.renderings)
                out << " (render " << ctx << " \"" << surface << "\")";
            out << ")";
        }
        out << ")\n";
    }
    for (const auto& [form, morphs] : lex.irregular_)
        for (const auto& [lemma, feature] : morphs)
            out << "(inflect \"" << form << "\" \"" << lemma << "\" " << inflect_name(feature) << ")\n";
    return out.str();
}

}  // namespace deepread
