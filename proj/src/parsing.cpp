#include "deepread/parsing.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <sstream>

namespace deepread {

namespace {

bool unit_is_verb(const TaggedUnit& u) { return is_verb(u.tag); }
bool unit_is_noun(const TaggedUnit& u) { return is_noun(u.tag); }

bool aux_lemma(const TaggedUnit& u) { return u.lemma == "be" || u.lemma == "have"; }

const std::set<std::string> kParticles = {"on", "off", "up", "down", "out", "in", "over"};

}  // namespace

std::vector<TaggedUnit> build_units(const TextPipe& pipe, const std::vector<Token>& tokens,
                                    const std::vector<TextEntity>& entities) {
    const Lexicon& lex = pipe.lexicon();
    std::vector<TaggedUnit> units;

    auto entity_starting = [&](int tok) -> const TextEntity* {
        for (const auto& e : entities)
            if (e.begin == tokens[tok].begin && e.kind != TextEntity::Kind::Word &&
                e.kind != TextEntity::Kind::Time)  // time words stay taggable words
                return &e;
        return nullptr;
    };

    int i = 0;
    const int n = static_cast<int>(tokens.size());
    while (i < n) {
        const Token& t = tokens[i];
        if (t.punct) {
            TaggedUnit u;
            u.begin = i;
            u.end = i + 1;
            u.surface = t.surface;
            u.punct = true;
            units.push_back(std::move(u));
            i++;
            continue;
        }

        if (const TextEntity* e = entity_starting(i)) {
            int j = i;
            while (j < n && tokens[j].end <= e->end) j++;
            TaggedUnit u;
            u.begin = i;
            u.end = j;
            u.surface = e->surface;
            u.lemma = lowercase(e->surface);
            u.entity = *e;
            switch (e->kind) {
                case TextEntity::Kind::Price:
                case TextEntity::Kind::Number:
                    u.tag = Pos::CD;
                    break;
                default:
                    u.tag = Pos::NNP;
                    break;
            }
            units.push_back(std::move(u));
            i = j;
            continue;
        }

        // longest multiword lexicon match
        const LexEntry* best_mw = nullptr;
        for (const LexEntry* mw : lex.multiwords_starting(lowercase(t.surface))) {
            int count = mw->token_count();
            if (i + count > n) continue;
            std::istringstream parts(mw->lemma);
            std::string part;
            bool ok = true;
            int j = i;
            while (parts >> part) {
                if (tokens[j].punct || lowercase(tokens[j].surface) != part) {
                    ok = false;
                    break;
                }
                j++;
            }
            if (ok) {
                best_mw = mw;
                break;  // multiwords_starting is longest-first
            }
        }
        if (best_mw) {
            TaggedUnit u;
            u.begin = i;
            u.end = i + best_mw->token_count();
            for (int j = i; j < u.end; ++j) {
                if (j > i) u.surface += " ";
                u.surface += tokens[j].surface;
            }
            u.lemma = best_mw->lemma;
            u.tag = best_mw->pos;
            u.entry = best_mw;
            units.push_back(std::move(u));
            i += best_mw->token_count();
            continue;
        }

        TaggedUnit u;
        u.begin = i;
        u.end = i + 1;
        u.surface = t.surface;
        u.tag = t.best_tag();
        u.unknown = true;
        u.lemma = lowercase(t.surface);
        for (const auto& r : lex.readings(t.surface)) {
            if (r.pos == u.tag) {
                u.lemma = r.lemma;
                u.feature = r.feature;
                u.entry = r.entry;
                u.unknown = false;
                break;
            }
        }
        units.push_back(std::move(u));
        i++;
    }
    return units;
}

// ---------------------------------------------------------------------------
// Chunker

namespace {

struct Chunk {
    enum class Kind { NP, Verb, Prep, Particle, To, Adjective, Adverb, Punct, Other };
    Kind kind = Kind::Other;
    int begin = 0, end = 0;  // unit range
    int head = -1;
    bool passive = false;    // verb groups
    bool copula = false;
    std::vector<int> det_units;  // determiner/possessive units inside an NP
};

std::vector<Chunk> scan_chunks(const std::vector<TaggedUnit>& units) {
    std::vector<Chunk> chunks;
    int i = 0;
    const int n = static_cast<int>(units.size());
    while (i < n) {
        const TaggedUnit& u = units[i];
        Chunk c;
        c.begin = i;
        if (u.punct) {
            c.kind = Chunk::Kind::Punct;
            c.end = i + 1;
        } else if (u.tag == Pos::PRP) {
            c.kind = Chunk::Kind::NP;
            c.head = i;
            c.end = i + 1;
        } else if (u.tag == Pos::DT || u.tag == Pos::PRPS || u.tag == Pos::JJ || unit_is_noun(u) ||
                   u.tag == Pos::CD) {
            int j = i;
            int last_noun = -1;
            while (j < n) {
                const TaggedUnit& w = units[j];
                if (w.punct) break;
                if (w.tag == Pos::DT || w.tag == Pos::PRPS) {
                    if (j != i) break;  // determiner starts a new NP
                    c.det_units.push_back(j);
                } else if (w.tag == Pos::JJ || w.tag == Pos::CD) {
                    // adjectives/numbers continue the NP
                } else if (unit_is_noun(w)) {
                    last_noun = j;
                } else {
                    break;
                }
                j++;
                // a fresh determiner opens the next NP
                if (j < n && (units[j].tag == Pos::DT || units[j].tag == Pos::PRPS)) break;
            }
            if (last_noun >= 0) {
                c.kind = Chunk::Kind::NP;
                c.head = last_noun;
                c.end = j;
            } else if (units[i].tag == Pos::CD) {
                c.kind = Chunk::Kind::NP;  // bare number/price
                c.head = i;
                c.end = i + 1;
            } else if (units[i].tag == Pos::JJ) {
                c.kind = Chunk::Kind::Adjective;
                c.head = i;
                c.end = i + 1;
            } else {
                c.kind = Chunk::Kind::Other;
                c.head = i;
                c.end = i + 1;
            }
        } else if (unit_is_verb(u)) {
            int j = i;
            int head = i;
            bool passive = false;
            while (j < n && unit_is_verb(units[j])) {
                head = j;
                j++;
                if (j < n && unit_is_verb(units[j]) && aux_lemma(units[head])) continue;
                break;
            }
            if (units[head].tag == Pos::VBN)
                for (int a = i; a < head; ++a)
                    if (units[a].lemma == "be") passive = true;
            c.kind = Chunk::Kind::Verb;
            c.head = head;
            c.end = j;
            c.passive = passive;
            c.copula = units[head].lemma == "be";
        } else if (u.tag == Pos::TO) {
            c.kind = Chunk::Kind::To;
            c.head = i;
            c.end = i + 1;
        } else if (u.tag == Pos::IN || u.tag == Pos::RP) {
            c.kind = u.tag == Pos::IN ? Chunk::Kind::Prep : Chunk::Kind::Particle;
            c.head = i;
            c.end = i + 1;
        } else if (u.tag == Pos::RB) {
            c.kind = Chunk::Kind::Adverb;
            c.head = i;
            c.end = i + 1;
        } else {
            c.kind = Chunk::Kind::Other;
            c.head = i;
            c.end = i + 1;
        }
        chunks.push_back(c);
        i = c.end;
    }
    return chunks;
}

ParseFragment leaf(const std::vector<TaggedUnit>& units, int unit) {
    ParseFragment f;
    f.label = ParseFragment::Label::Unit;
    f.unit = unit;
    f.head = unit;
    f.begin = unit;
    f.end = unit + 1;
    (void)units;
    return f;
}

ParseFragment np_fragment(const std::vector<TaggedUnit>& units, const Chunk& c) {
    ParseFragment f;
    f.label = ParseFragment::Label::NP;
    f.begin = c.begin;
    f.end = c.end;
    f.head = c.head;
    for (int u = c.begin; u < c.end; ++u) f.children.push_back(leaf(units, u));
    return f;
}

// assembled sentence structure before frame building
struct Assembly {
    std::vector<ParseFragment> fragments;
    // index paths of ambiguous PPs inside fragments: (s_index, vp_child_index)
    struct Site {
        int fragment;     // index into fragments (an S)
        int vp_child;     // index of the PP among the VP's children
        int np_child;     // index of the NP the PP may attach to
    };
    std::vector<Site> sites;
};

ParseFragment pp_fragment(const std::vector<TaggedUnit>& units, const Chunk& prep, ParseFragment np) {
    ParseFragment pp;
    pp.label = ParseFragment::Label::PP;
    pp.begin = prep.begin;
    pp.end = np.end;
    pp.head = prep.head;
    pp.prep = units[prep.head].lemma;
    pp.children.push_back(leaf(units, prep.head));
    pp.children.push_back(std::move(np));
    return pp;
}

// Parses NP with following of-PPs folded in: "the shaft of the elevator".
std::optional<ParseFragment> parse_np(const std::vector<TaggedUnit>& units,
                                      const std::vector<Chunk>& chunks, size_t& pos) {
    if (pos >= chunks.size() || chunks[pos].kind != Chunk::Kind::NP) return std::nullopt;
    ParseFragment np = np_fragment(units, chunks[pos]);
    pos++;
    while (pos + 1 < chunks.size() && chunks[pos].kind == Chunk::Kind::Prep &&
           units[chunks[pos].head].lemma == "of" && chunks[pos + 1].kind == Chunk::Kind::NP) {
        Chunk prep = chunks[pos];
        pos++;
        ParseFragment inner = *parse_np(units, chunks, pos);
        np.children.push_back(pp_fragment(units, prep, std::move(inner)));
        np.end = np.children.back().end;
    }
    return np;
}

struct VpParser {
    const std::vector<TaggedUnit>& units;
    const std::vector<Chunk>& chunks;
    Assembly& assembly;

    // Parses the verb group at `pos` plus its complements. Returns the VP.
    ParseFragment parse_vp(size_t& pos) {
        const Chunk& v = chunks[pos];
        ParseFragment vp;
        vp.label = ParseFragment::Label::VP;
        vp.begin = v.begin;
        vp.end = v.end;
        vp.head = v.head;
        vp.passive = v.passive;
        for (int u = v.begin; u < v.end; ++u) vp.children.push_back(leaf(units, u));
        pos++;

        int nps_seen = 0;
        while (pos < chunks.size()) {
            const Chunk& c = chunks[pos];
            if (c.kind == Chunk::Kind::NP) {
                // NP directly followed by a verb group opens a relative/complement
                // clause rather than another object
                if (pos + 1 < chunks.size() && chunks[pos + 1].kind == Chunk::Kind::Verb) {
                    ParseFragment clause;
                    clause.label = ParseFragment::Label::Clause;
                    size_t cpos = pos;
                    ParseFragment subj = *parse_np(units, chunks, cpos);
                    clause.begin = subj.begin;
                    clause.head = chunks[cpos].head;
                    ParseFragment cvp = parse_vp(cpos);
                    clause.end = cvp.end;
                    clause.children.push_back(std::move(subj));
                    clause.children.push_back(std::move(cvp));
                    vp.children.push_back(std::move(clause));
                    vp.end = vp.children.back().end;
                    pos = cpos;
                    continue;
                }
                if (nps_seen >= 2) break;
                ParseFragment np = *parse_np(units, chunks, pos);
                vp.end = np.end;
                vp.children.push_back(std::move(np));
                nps_seen++;
                continue;
            }
            if (c.kind == Chunk::Kind::Adjective) {
                vp.children.push_back(leaf(units, c.head));
                vp.end = c.end;
                pos++;
                continue;
            }
            if (c.kind == Chunk::Kind::Adverb) {
                vp.children.push_back(leaf(units, c.head));
                vp.end = c.end;
                pos++;
                continue;
            }
            if (c.kind == Chunk::Kind::To && pos + 1 < chunks.size() &&
                chunks[pos + 1].kind == Chunk::Kind::Verb) {
                ParseFragment clause;
                clause.label = ParseFragment::Label::Clause;
                clause.begin = c.begin;
                size_t cpos = pos + 1;
                clause.head = chunks[cpos].head;
                clause.children.push_back(leaf(units, c.head));
                ParseFragment cvp = parse_vp(cpos);
                clause.end = cvp.end;
                clause.children.push_back(std::move(cvp));
                vp.children.push_back(std::move(clause));
                vp.end = vp.children.back().end;
                pos = cpos;
                continue;
            }
            if ((c.kind == Chunk::Kind::Prep || c.kind == Chunk::Kind::Particle ||
                 c.kind == Chunk::Kind::To) &&
                pos + 1 < chunks.size() && chunks[pos + 1].kind == Chunk::Kind::NP) {
                Chunk prep = c;
                pos++;
                ParseFragment np = *parse_np(units, chunks, pos);
                ParseFragment pp = pp_fragment(units, prep, std::move(np));
                vp.end = pp.end;
                vp.children.push_back(std::move(pp));
                continue;
            }
            if (c.kind == Chunk::Kind::Particle &&
                kParticles.count(units[c.head].lemma)) {
                vp.children.push_back(leaf(units, c.head));
                vp.end = c.end;
                pos++;
                continue;
            }
            break;
        }
        return vp;
    }
};

}  // namespace

std::string ParseFragment::bracket(const std::vector<TaggedUnit>& units) const {
    switch (label) {
        case Label::Unit: {
            const TaggedUnit& u = units[unit];
            std::string cat;
            if (u.entity && u.entity->kind == TextEntity::Kind::Name) cat = "Name";
            else if (u.tag == Pos::DT || u.tag == Pos::PRPS) cat = "Det";
            else if (is_noun(u.tag)) cat = "N";
            else if (is_verb(u.tag)) cat = "V";
            else if (u.tag == Pos::IN || u.tag == Pos::TO || u.tag == Pos::RP) cat = "Prep";
            else if (u.tag == Pos::JJ) cat = "Adj";
            else if (u.tag == Pos::RB) cat = "Adv";
            else if (u.tag == Pos::PRP) cat = "Pro";
            else cat = pos_name(u.tag);
            return "[" + cat + " " + u.surface + "]";
        }
        case Label::NP:
        case Label::VP:
        case Label::PP:
        case Label::Clause:
        case Label::S: {
            std::string name = label == Label::NP   ? "NP"
                               : label == Label::VP ? "VP"
                               : label == Label::PP ? "PP"
                               : label == Label::S  ? "S"
                                                    : "Clause";
            std::string s = "[" + name;
            for (const auto& c : children) s += " " + c.bracket(units);
            return s + "]";
        }
    }
    return "";
}

ChunkResult chunk_parse(const std::vector<TaggedUnit>& units, int max_alternatives) {
    ChunkResult result;
    std::vector<Chunk> chunks = scan_chunks(units);

    Assembly assembly;
    size_t pos = 0;
    std::optional<ParseFragment> pending_subject;
    std::optional<ParseFragment> last_subject;  // for coordinated predicates
    while (pos < chunks.size()) {
        const Chunk& c = chunks[pos];
        if (c.kind == Chunk::Kind::NP) {
            if (pending_subject) {
                assembly.fragments.push_back(std::move(*pending_subject));
                pending_subject.reset();
            }
            size_t next = pos;
            ParseFragment np = *parse_np(units, chunks, next);
            pos = next;
            if (pos < chunks.size() && chunks[pos].kind == Chunk::Kind::Verb) {
                pending_subject = std::move(np);
            } else {
                assembly.fragments.push_back(std::move(np));
            }
            continue;
        }
        if (c.kind == Chunk::Kind::Verb) {
            VpParser vparser{units, chunks, assembly};
            ParseFragment subj;
            bool have_subject = false;
            if (pending_subject) {
                subj = std::move(*pending_subject);
                pending_subject.reset();
                have_subject = true;
            } else if (last_subject) {
                subj = *last_subject;  // coordinated predicate borrows the subject
                have_subject = true;
            }
            ParseFragment vp = vparser.parse_vp(pos);
            if (have_subject) {
                last_subject = subj;
                ParseFragment s;
                s.label = ParseFragment::Label::S;
                s.begin = subj.begin;
                s.end = vp.end;
                s.head = vp.head;
                s.children.push_back(std::move(subj));
                s.children.push_back(std::move(vp));
                assembly.fragments.push_back(std::move(s));
            } else {
                assembly.fragments.push_back(std::move(vp));
            }
            continue;
        }
        if (c.kind == Chunk::Kind::Prep && pos + 1 < chunks.size() &&
            chunks[pos + 1].kind == Chunk::Kind::NP) {
            Chunk prep = c;
            pos++;
            ParseFragment np = *parse_np(units, chunks, pos);
            assembly.fragments.push_back(pp_fragment(units, prep, std::move(np)));
            continue;
        }
        if (c.kind == Chunk::Kind::Punct) {
            pos++;  // punctuation is not a fragment
            continue;
        }
        assembly.fragments.push_back(leaf(units, c.head));
        pos++;
    }
    if (pending_subject) assembly.fragments.push_back(std::move(*pending_subject));

    // collect ambiguous PP-attachment sites: a PP among VP children directly
    // following an object NP may instead attach to that NP ("of" is folded
    // into NPs already; by-phrases of passives stay on the VP)
    for (size_t fi = 0; fi < assembly.fragments.size(); ++fi) {
        ParseFragment& frag = assembly.fragments[fi];
        if (frag.label != ParseFragment::Label::S) continue;
        ParseFragment& vp = frag.children[1];
        for (size_t ci = 0; ci < vp.children.size(); ++ci) {
            const ParseFragment& child = vp.children[ci];
            if (child.label != ParseFragment::Label::PP) continue;
            if (vp.passive && child.prep == "by") continue;
            // nearest preceding NP child, directly adjacent
            for (int q = static_cast<int>(ci) - 1; q >= 0; --q) {
                if (vp.children[q].label == ParseFragment::Label::NP) {
                    if (vp.children[q].end == child.begin)
                        assembly.sites.push_back({static_cast<int>(fi), static_cast<int>(ci), q});
                    break;
                }
            }
        }
    }

    // enumerate attachment choices; choice bit 1 moves the PP under the NP
    int nsites = static_cast<int>(assembly.sites.size());
    long combos = 1L << std::min(nsites, 20);
    for (long mask = 0; mask < combos; ++mask) {
        if (static_cast<int>(result.alternatives.size()) >= max_alternatives) {
            result.truncated = true;
            break;
        }
        Parse parse = assembly.fragments;
        bool ok = true;
        // apply NP attachments right-to-left so child indexes stay valid
        for (int s = nsites - 1; s >= 0; --s) {
            if (!(mask >> s & 1)) continue;
            const auto& site = assembly.sites[s];
            ParseFragment& vp = parse[site.fragment].children[1];
            ParseFragment pp = vp.children[site.vp_child];
            ParseFragment& np = vp.children[site.np_child];
            if (np.end != pp.begin) {
                ok = false;
                break;
            }
            np.children.push_back(pp);
            np.end = pp.end;
            vp.children.erase(vp.children.begin() + site.vp_child);
        }
        if (ok) result.alternatives.push_back(std::move(parse));
    }
    if (result.alternatives.empty()) result.alternatives.push_back(assembly.fragments);
    return result;
}

// ---------------------------------------------------------------------------
// Entities and frames

DiscourseEntity& EntityRegistry::fresh(const std::string& head_lemma, int sentence) {
    std::string base = head_lemma.empty() ? "entity" : head_lemma;
    for (char& c : base)
        if (c == ' ') c = '-';
    int n = ++counters_[base];
    std::string id = base + std::to_string(n);
    DiscourseEntity e;
    e.id = id;
    e.head_lemma = head_lemma;
    e.sentence = sentence;
    e.last_mention = sentence;
    order_.push_back(id);
    return entities_.emplace(id, std::move(e)).first->second;
}

DiscourseEntity* EntityRegistry::find(const std::string& id) {
    auto it = entities_.find(id);
    return it == entities_.end() ? nullptr : &it->second;
}

const DiscourseEntity* EntityRegistry::find(const std::string& id) const {
    auto it = entities_.find(id);
    return it == entities_.end() ? nullptr : &it->second;
}

std::vector<const DiscourseEntity*> EntityRegistry::in_order() const {
    std::vector<const DiscourseEntity*> out;
    for (const auto& id : order_) out.push_back(&entities_.at(id));
    return out;
}

std::string Frame::dump(const EntityRegistry& reg) const {
    std::string s = "[" + frame_type;
    for (const auto& [role, filler] : roles) s += " " + role + "=" + filler.text();
    (void)reg;
    return s + "]";
}

namespace {

struct FrameBuilder {
    const KnowledgeBase& kb;
    const Lexicon& lex;
    SentenceAnalysis& sa;
    EntityRegistry& registry;
    FrameCounters& counters;

    // NP span -> entity id, stable across parse alternatives
    std::map<std::pair<int, int>, std::string> np_entity;
    std::map<int, int> group_of_verb;  // verb unit -> group id
    int next_group = 0;

    const TaggedUnit& head_unit(const ParseFragment& np) const { return sa.units[np.head]; }

    static bool is_pronoun_surface(const std::string& s) {
        static const std::set<std::string> p = {"he", "she", "it", "they", "him", "her",
                                                "them", "himself", "herself", "itself"};
        return p.count(s) > 0;
    }

    std::vector<ConceptId> concepts_for(const TaggedUnit& u) const {
        std::vector<ConceptId> out;
        if (u.entity) {
            switch (u.entity->kind) {
                case TextEntity::Kind::Name: out.push_back("person"); break;
                case TextEntity::Kind::Price: out.push_back("monetary-amount"); break;
                case TextEntity::Kind::Number: out.push_back("quantity"); break;
                case TextEntity::Kind::Place: out.push_back("place"); break;
                default: break;
            }
        }
        if (u.entry)
            for (const auto& s : u.entry->senses) out.push_back(s.concept_id);
        if (out.empty() && !u.lemma.empty()) {
            const LexEntry* noun = lex.find(u.lemma, Pos::NN);
            if (noun)
                for (const auto& s : noun->senses) out.push_back(s.concept_id);
        }
        return out;
    }

    bool concepts_person(const std::vector<ConceptId>& cs) const {
        for (const auto& c : cs)
            if (kb.has_concept(c) && kb.has_concept("person") && kb.specializes(c, "person")) return true;
        return false;
    }

    // Returns the discourse entity (or anaphor placeholder) for an NP.
    std::string entity_for_np(const ParseFragment& np, const std::string& role) {
        auto key = std::make_pair(np.begin, np.end);
        auto cached = np_entity.find(key);
        if (cached != np_entity.end()) {
            touch(cached->second, np, role);
            return cached->second;
        }
        const TaggedUnit& head = head_unit(np);
        std::string id;

        if (head.entity && head.entity->kind == TextEntity::Kind::Name) {
            id = name_entity(head);
        } else if (head.entity) {
            // price/number/place entities become ordinary discourse entities
            DiscourseEntity& e = registry.fresh(head.lemma, sa.sentence);
            e.name = head.surface;
            e.concepts = concepts_for(head);
            sa.introduced.push_back(e.id);
            id = e.id;
        } else if (head.tag == Pos::PRP) {
            id = pronoun_anaphor(head, np);
        } else {
            bool definite = false;
            bool possessive = false;
            for (const auto& child : np.children) {
                if (child.label != ParseFragment::Label::Unit) continue;
                const TaggedUnit& cu = sa.units[child.unit];
                if (cu.tag == Pos::DT && (cu.lemma == "the")) definite = true;
                if (cu.tag == Pos::PRPS) possessive = true;
            }
            std::vector<ConceptId> concepts = concepts_for(head);
            if (definite) {
                DiscourseEntity& e = registry.fresh(head.lemma, sa.sentence);
                e.anaphor = true;
                e.concepts = concepts;
                e.person = concepts_person(concepts);
                e.plural = head.tag == Pos::NNS;
                Anaphor a;
                a.id = e.id;
                a.kind = AnaphorKind::DefiniteNP;
                a.sentence = sa.sentence;
                a.unit = np.head;
                a.surface = head.surface;
                a.head_lemma = head.lemma;
                a.plural = e.plural;
                sa.anaphors.push_back(a);
                id = e.id;
            } else {
                DiscourseEntity& e = registry.fresh(head.lemma, sa.sentence);
                e.concepts = concepts;
                e.person = concepts_person(concepts);
                e.plural = head.tag == Pos::NNS;
                sa.introduced.push_back(e.id);
                id = e.id;
            }
            if (possessive) {
                for (const auto& child : np.children) {
                    if (child.label != ParseFragment::Label::Unit) continue;
                    const TaggedUnit& cu = sa.units[child.unit];
                    if (cu.tag != Pos::PRPS) continue;
                    DiscourseEntity& owner = registry.fresh(cu.lemma, sa.sentence);
                    owner.anaphor = true;
                    owner.person = cu.lemma != "its";
                    owner.plural = cu.lemma == "their";
                    Anaphor a;
                    a.id = owner.id;
                    a.kind = AnaphorKind::Possessive;
                    a.sentence = sa.sentence;
                    a.unit = child.unit;
                    a.surface = cu.surface;
                    a.person_only = cu.lemma == "his" || cu.lemma == "her" || cu.lemma == "my";
                    a.nonperson_only = cu.lemma == "its";
                    a.plural = cu.lemma == "their";
                    sa.anaphors.push_back(a);
                }
            }
        }
        np_entity[key] = id;
        touch(id, np, role);
        return id;
    }

    void touch(const std::string& id, const ParseFragment& np, const std::string& role) {
        DiscourseEntity* e = registry.find(id);
        if (!e) return;
        e->last_mention = sa.sentence;
        e->last_position = np.head;
        if (!role.empty()) e->last_role = role;
    }

    std::string name_entity(const TaggedUnit& head) {
        // last capitalized word is the surname; an existing entity sharing it
        // is the same individual
        std::istringstream ss(head.entity->value);
        std::string word, surname;
        while (ss >> word)
            if (word.size() > 2 || word.back() != '.') surname = word;
        for (const auto* e : registry.in_order()) {
            if (e->name.empty()) continue;
            std::istringstream es(e->name);
            while (es >> word)
                if (word == surname) return e->id;
        }
        DiscourseEntity& e = registry.fresh(lowercase(surname), sa.sentence);
        e.name = head.entity->value;
        e.person = true;
        e.concepts = {"person"};
        sa.introduced.push_back(e.id);
        return e.id;
    }

    std::string pronoun_anaphor(const TaggedUnit& head, const ParseFragment& np) {
        DiscourseEntity& e = registry.fresh(head.lemma, sa.sentence);
        e.anaphor = true;
        Anaphor a;
        a.id = e.id;
        a.kind = AnaphorKind::Pronoun;
        a.sentence = sa.sentence;
        a.unit = np.head;
        a.surface = head.surface;
        std::string w = head.lemma;
        a.plural = w == "they" || w == "them";
        a.person_only = w == "he" || w == "she" || w == "him" || w == "her" || w == "himself" ||
                        w == "herself" || w == "they" || w == "them";
        a.nonperson_only = w == "it" || w == "itself";
        e.person = a.person_only;
        e.plural = a.plural;
        sa.anaphors.push_back(a);
        return e.id;
    }

    struct VpShape {
        const ParseFragment* vp = nullptr;
        const ParseFragment* subject = nullptr;
        std::vector<const ParseFragment*> objects;
        std::vector<const ParseFragment*> pps;
        std::vector<int> particles;      // unit indexes
        std::vector<int> adjectives;     // unit indexes (copula complements)
        const ParseFragment* clause = nullptr;
    };

    VpShape shape_of(const ParseFragment& s_or_vp) const {
        VpShape shape;
        const ParseFragment* vp = &s_or_vp;
        if (s_or_vp.label == ParseFragment::Label::S) {
            shape.subject = &s_or_vp.children[0];
            vp = &s_or_vp.children[1];
        }
        shape.vp = vp;
        for (const auto& child : vp->children) {
            switch (child.label) {
                case ParseFragment::Label::NP:
                    shape.objects.push_back(&child);
                    break;
                case ParseFragment::Label::PP:
                    shape.pps.push_back(&child);
                    break;
                case ParseFragment::Label::Clause:
                    shape.clause = &child;
                    break;
                case ParseFragment::Label::Unit: {
                    const TaggedUnit& u = sa.units[child.unit];
                    if (u.tag == Pos::RP) shape.particles.push_back(child.unit);
                    if (u.tag == Pos::JJ) shape.adjectives.push_back(child.unit);
                    break;
                }
                default:
                    break;
            }
        }
        return shape;
    }

    // Builds frames for one S/VP fragment; returns the ids made for this verb.
    std::vector<int> frames_for_vp(const ParseFragment& frag, int parse_alt,
                                   const std::string& controller) {
        VpShape shape = shape_of(frag);
        const TaggedUnit& verb = sa.units[shape.vp->head];
        const LexEntry* entry = lex.find(verb.lemma, Pos::VB);
        if (!entry) {
            sa.unframed_verbs.push_back(shape.vp->head);
            return {};
        }

        // clause subframes first; the clause's subject is its own NP, else the
        // matrix object (object control), else the matrix subject
        std::vector<int> clause_frames;
        if (shape.clause) {
            const ParseFragment* cvp = nullptr;
            const ParseFragment* csubj = nullptr;
            for (const auto& child : shape.clause->children) {
                if (child.label == ParseFragment::Label::VP) cvp = &child;
                if (child.label == ParseFragment::Label::NP) csubj = &child;
            }
            std::string clause_subject;
            if (csubj)
                clause_subject = entity_for_np(*csubj, "subject");
            else if (!shape.objects.empty())
                clause_subject = entity_for_np(*shape.objects[0], "object");
            else if (shape.subject && !shape.vp->passive)
                clause_subject = entity_for_np(*shape.subject, "subject");
            else
                clause_subject = controller;
            if (cvp) clause_frames = frames_for_vp(*cvp, parse_alt, clause_subject);
        }

        int group;
        auto git = group_of_verb.find(shape.vp->head);
        if (git == group_of_verb.end()) {
            group = next_group++;
            group_of_verb[shape.vp->head] = group;
        } else {
            group = git->second;
        }

        std::vector<int> made;
        for (const auto& sense : entry->senses) {
            for (const auto& pattern : sense.patterns) {
                Frame frame;
                frame.frame_type = pattern.frame_type;
                frame.sentence = sa.sentence;
                frame.begin = sa.units[shape.vp->head].begin;
                frame.end = sa.units[shape.vp->head].end;
                frame.group = group;
                frame.verb_lemma = verb.lemma;
                frame.verb_sense = sense.concept_id;
                frame.passive = shape.vp->passive;
                frame.parse_alt = parse_alt;
                if (!match_pattern(pattern, sense, shape, controller, clause_frames, frame)) continue;
                // one alternative per viable reading: identical readings from
                // different parse alternatives collapse
                bool dup = false;
                for (const auto& other : sa.frames)
                    if (other.group == frame.group && other.frame_type == frame.frame_type &&
                        other.verb_sense == frame.verb_sense && other.roles == frame.roles)
                        dup = true;
                if (dup) continue;
                frame.id = counters.next_frame_id++;
                sa.frames.push_back(frame);
                made.push_back(frame.id);
            }
        }
        if (made.empty() && clause_frames.empty())
            sa.unframed_verbs.push_back(shape.vp->head);
        return made;
    }

    bool match_pattern(const ArgPattern& pattern, const Sense& sense, const VpShape& shape,
                       const std::string& controller, const std::vector<int>& clause_frames,
                       Frame& frame) {
        std::vector<const ParseFragment*> objects = shape.objects;
        std::vector<const ParseFragment*> pps = shape.pps;
        size_t next_object = 0;

        for (const auto& slot : pattern.slots) {
            switch (slot.kind) {
                case PatternSlot::Kind::Subject: {
                    std::string filler;
                    if (frame.passive) {
                        for (auto it = pps.begin(); it != pps.end(); ++it) {
                            if ((*it)->prep == "by") {
                                filler = entity_for_np((*it)->children[1], "other");
                                pps.erase(it);
                                break;
                            }
                        }
                        if (filler.empty()) break;  // passive agent may be unexpressed
                    } else if (shape.subject) {
                        filler = entity_for_np(*shape.subject, "subject");
                    } else if (!controller.empty()) {
                        filler = controller;
                    } else if (!slot.optional) {
                        return false;
                    }
                    if (!filler.empty()) set_role(frame, sense, slot.role, filler);
                    break;
                }
                case PatternSlot::Kind::Object: {
                    std::string filler;
                    if (frame.passive) {
                        if (shape.subject) filler = entity_for_np(*shape.subject, "subject");
                    } else if (next_object < objects.size()) {
                        filler = entity_for_np(*objects[next_object], "object");
                        next_object++;
                    }
                    if (filler.empty()) {
                        if (!slot.optional) return false;
                        break;
                    }
                    set_role(frame, sense, slot.role, filler);
                    break;
                }
                case PatternSlot::Kind::Object2: {
                    if (next_object >= objects.size()) {
                        if (!slot.optional) return false;
                        break;
                    }
                    set_role(frame, sense, slot.role, entity_for_np(*objects[next_object], "object"));
                    next_object++;
                    break;
                }
                case PatternSlot::Kind::Prep: {
                    bool found = false;
                    for (auto it = pps.begin(); it != pps.end(); ++it) {
                        if ((*it)->prep == slot.prep) {
                            set_role(frame, sense, slot.role, entity_for_np((*it)->children[1], "other"));
                            pps.erase(it);
                            found = true;
                            break;
                        }
                    }
                    if (!found && !slot.optional) return false;
                    break;
                }
                case PatternSlot::Kind::Particle: {
                    bool found = false;
                    for (int p : shape.particles)
                        if (sa.units[p].lemma == slot.prep) found = true;
                    if (!found) return false;
                    break;
                }
                case PatternSlot::Kind::Adjective: {
                    if (shape.adjectives.empty()) {
                        if (!slot.optional) return false;
                        break;
                    }
                    const TaggedUnit& adj = sa.units[shape.adjectives.front()];
                    const LexEntry* jj = adj.entry ? adj.entry : lex.find(adj.lemma, Pos::JJ);
                    if (!jj || jj->senses.empty()) return false;
                    RoleFiller filler;
                    filler.kind = RoleFiller::Kind::Concept;
                    filler.entity = jj->senses.front().concept_id;
                    frame.roles[slot.role] = filler;
                    break;
                }
                case PatternSlot::Kind::Clause: {
                    if (clause_frames.empty()) {
                        if (!slot.optional) return false;
                        break;
                    }
                    RoleFiller filler;
                    filler.kind = RoleFiller::Kind::SubFrame;
                    filler.subframe = clause_frames.front();
                    frame.roles[slot.role] = filler;
                    break;
                }
            }
        }
        return true;
    }

    void set_role(Frame& frame, const Sense& sense, const std::string& role, const std::string& entity) {
        RoleFiller filler;
        filler.kind = RoleFiller::Kind::Entity;
        filler.entity = entity;
        frame.roles[role] = filler;
        const DiscourseEntity* e = registry.find(entity);
        if (e) {
            double best = 0;
            for (const auto& c : e->concepts)
                if (kb.has_concept(c)) best = std::max(best, selectional_fit(kb, sense, role, c));
            frame.fit += best;
        }
    }
};

}  // namespace

void build_frames(const KnowledgeBase& kb, const Lexicon& lex, SentenceAnalysis& sa,
                  EntityRegistry& registry, FrameCounters& counters) {
    FrameBuilder builder{kb, lex, sa, registry, counters};
    for (size_t alt = 0; alt < sa.chunks.alternatives.size(); ++alt) {
        const Parse& parse = sa.chunks.alternatives[alt];
        for (const auto& frag : parse) {
            if (frag.label == ParseFragment::Label::S || frag.label == ParseFragment::Label::VP) {
                builder.frames_for_vp(frag, static_cast<int>(alt), "");
            } else if (frag.label == ParseFragment::Label::NP && alt == 0) {
                builder.entity_for_np(frag, "other");
            }
        }
    }

    // copula identity readings alias the complement entity to the subject
    for (const auto& f : sa.frames) {
        if (f.frame_type != "identity-state") continue;
        auto subj = f.roles.find("subject");
        auto comp = f.roles.find("complement");
        if (subj != f.roles.end() && comp != f.roles.end() &&
            subj->second.kind == RoleFiller::Kind::Entity &&
            comp->second.kind == RoleFiller::Kind::Entity)
            sa.aliases.emplace_back(comp->second.entity, subj->second.entity);
    }
}

std::vector<AnaphorCandidate> anaphor_candidates(const KnowledgeBase& kb, const EntityRegistry& registry,
                                                 const Anaphor& anaphor) {
    struct Scored {
        const DiscourseEntity* e;
    };
    std::vector<const DiscourseEntity*> compatible;
    for (const auto* e : registry.in_order()) {
        if (e->id == anaphor.id || e->anaphor) continue;
        if (e->sentence > anaphor.sentence) continue;
        if (anaphor.plural != e->plural) continue;
        if (anaphor.person_only && !e->person) continue;
        if (anaphor.nonperson_only && e->person) continue;
        if (anaphor.kind == AnaphorKind::DefiniteNP) {
            bool match = e->head_lemma == anaphor.head_lemma;
            if (!match) {
                // or the entity's sense specializes the anaphor's head sense
                const DiscourseEntity* self = registry.find(anaphor.id);
                if (self) {
                    for (const auto& ac : self->concepts) {
                        if (!kb.has_concept(ac)) continue;
                        for (const auto& ec : e->concepts)
                            if (kb.has_concept(ec) && kb.specializes(ec, ac)) match = true;
                    }
                }
            }
            if (!match) continue;
        }
        compatible.push_back(e);
    }

    // recency rank: most recently mentioned first
    std::sort(compatible.begin(), compatible.end(), [](const DiscourseEntity* a, const DiscourseEntity* b) {
        if (a->last_mention != b->last_mention) return a->last_mention > b->last_mention;
        if (a->last_position != b->last_position) return a->last_position > b->last_position;
        return a->id < b->id;
    });

    std::vector<AnaphorCandidate> out;
    for (size_t rank = 0; rank < compatible.size(); ++rank) {
        const DiscourseEntity* e = compatible[rank];
        double salience = 1.0 / static_cast<double>(rank + 1);
        if (e->last_role == "subject") salience += 2;
        else if (e->last_role == "object") salience += 1;
        out.push_back({anaphor.id, e->id, salience});
    }
    return out;
}

}  // namespace deepread
