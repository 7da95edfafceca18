#include "deepread/agents.hpp"

#include <algorithm>
#include <sstream>

#include "deepread/sexpr.hpp"

namespace deepread {

std::vector<Realm> builtin_realms() {
    return {
        {"physical", false},  {"possession", false}, {"device", false},
        {"coercion", false},  {"emotion", true},     {"need-goal", true},
        {"personal", true},   {"competition", false}, {"mental", false},
        {"lexical", false},   {"reference", false},  {"parse", false},
    };
}

namespace {

const std::pair<HypKind, const char*> kKindNames[] = {
    {HypKind::SenseChoice, "sense-choice"},
    {HypKind::ReferentChoice, "referent-choice"},
    {HypKind::AttachmentChoice, "attachment-choice"},
    {HypKind::Event, "event"},
    {HypKind::State, "state"},
    {HypKind::Goal, "goal"},
    {HypKind::Merge, "merge"},
};

std::string dashed(std::string s) {
    for (char& c : s)
        if (c == ' ') c = '-';
    return s;
}

Proposition sense_prop(const std::string& lemma, const ConceptId& concept_id) {
    return Proposition{"sense-of", {dashed(lemma), concept_id}};
}

}  // namespace

std::string hyp_kind_name(HypKind k) {
    for (const auto& [kind, name] : kKindNames)
        if (kind == k) return name;
    return "?";
}

std::optional<HypKind> hyp_kind_from_name(const std::string& name) {
    for (const auto& [kind, kname] : kKindNames)
        if (name == kname) return kind;
    return std::nullopt;
}

std::string Proposition::text() const {
    std::string s = "(" + predicate;
    for (const auto& a : args) s += " " + a;
    return s + ")";
}

// ---------------------------------------------------------------------------
// Stores

int HypothesisStore::propose(const std::string& realm, const std::string& instance, HypKind kind,
                             Proposition prop, const std::string& rule, int sentence) {
    std::string key = realm + "|" + prop.text();
    auto it = by_key_.find(key);
    if (it != by_key_.end()) return it->second;
    Hypothesis h;
    h.id = next_id_++;
    h.realm = realm;
    h.instance = instance;
    h.kind = kind;
    h.prop = std::move(prop);
    h.rule = rule;
    h.sentence = sentence;
    by_key_[key] = h.id;
    hyps_.push_back(std::move(h));
    return hyps_.back().id;
}

const Hypothesis* HypothesisStore::find(int id) const {
    for (const auto& h : hyps_)
        if (h.id == id) return &h;
    return nullptr;
}

Hypothesis* HypothesisStore::find(int id) {
    for (auto& h : hyps_)
        if (h.id == id) return &h;
    return nullptr;
}

const Hypothesis* HypothesisStore::find_prop(const std::string& realm, const Proposition& prop) const {
    auto it = by_key_.find(realm + "|" + prop.text());
    return it == by_key_.end() ? nullptr : find(it->second);
}

const Hypothesis* HypothesisStore::find_prop_any(const Proposition& prop) const {
    for (const auto& h : hyps_)
        if (h.prop == prop) return &h;
    return nullptr;
}

std::vector<const Hypothesis*> HypothesisStore::live() const {
    std::vector<const Hypothesis*> out;
    for (const auto& h : hyps_)
        if (!h.retired) out.push_back(&h);
    return out;
}

void HypothesisStore::retire(int id) {
    if (Hypothesis* h = find(id)) h->retired = true;
}

void HypothesisStore::restore(int id) {
    if (Hypothesis* h = find(id)) {
        h->retired = false;
        h->false_streak = 0;
    }
}

int ConstraintStore::add_hard(Formula f, const std::string& rule, const std::string& key) {
    if (!keys_.insert(key).second) {
        for (const auto& c : constraints_)
            if (c.key == key) return c.id;
        return 0;
    }
    StoredConstraint c;
    c.id = next_id_++;
    c.hard = true;
    c.formula = std::move(f);
    c.rule = rule;
    c.key = key;
    constraints_.push_back(std::move(c));
    return constraints_.back().id;
}

int ConstraintStore::add_soft(double weight, Formula f, const std::string& rule, const std::string& key) {
    if (!(weight > 0)) throw std::runtime_error("soft constraint weight must be positive");
    if (!keys_.insert(key).second) {
        for (const auto& c : constraints_)
            if (c.key == key) return c.id;
        return 0;
    }
    StoredConstraint c;
    c.id = next_id_++;
    c.hard = false;
    c.weight = weight;
    c.formula = std::move(f);
    c.rule = rule;
    c.key = key;
    constraints_.push_back(std::move(c));
    return constraints_.back().id;
}

void ConstraintStore::add_to_group(const std::string& group, int hyp_id) {
    auto& members = groups_[group];
    if (std::find(members.begin(), members.end(), hyp_id) == members.end())
        members.push_back(hyp_id);
}

void ConstraintStore::add_link(const HypothesisStore& hyps, int cause, int effect,
                               const std::string& rule) {
    if (cause == effect)
        throw std::runtime_error("causal link cannot be reflexive (hypothesis " +
                                 std::to_string(cause) + ")");
    if (!hyps.find(cause) || !hyps.find(effect))
        throw std::runtime_error("causal link references unknown hypothesis");
    CausalLink link{cause, effect, rule};
    if (std::find(links_.begin(), links_.end(), link) == links_.end()) links_.push_back(link);
}

ConstraintSystem build_system(const HypothesisStore& hyps, const ConstraintStore& constraints) {
    ConstraintSystem system;
    for (const auto& h : hyps.all()) {
        system.declare(h.id, h.prop.text());
        if (h.retired) system.hard.push_back(Formula::negate(Formula::variable(h.id)));
    }
    for (const auto& [name, members] : constraints.groups()) {
        std::vector<int> live;
        for (int id : members) {
            const Hypothesis* h = hyps.find(id);
            if (h && !h->retired) live.push_back(id);
        }
        // retired members are excluded: their forced-false var would make the
        // exactly-one group unsatisfiable
        if (!live.empty()) system.hard.push_back(Formula::exactly_one_of(live));
    }
    for (const auto& c : constraints.constraints()) {
        if (c.hard)
            system.hard.push_back(c.formula);
        else
            system.soft.push_back({c.weight, c.formula});
    }
    system.validate();
    return system;
}

// ---------------------------------------------------------------------------
// Rule parsing

namespace {

Proposition parse_prop(const Sexpr& form, const std::string& file) {
    if (!form.is_list() || form.items.empty())
        throw ParseError(file, form.line, "expected a (predicate args...) proposition");
    Proposition p;
    p.predicate = form.at(0).str();
    for (size_t i = 1; i < form.size(); ++i) p.args.push_back(form.at(i).str());
    return p;
}

RuleFormula parse_rule_formula(const Sexpr& form, const std::string& file) {
    RuleFormula f;
    if (form.is_atom() || form.is_string()) {
        f.kind = RuleFormula::Kind::Label;
        f.label = form.str();
        return f;
    }
    const std::string& head = form.head();
    if (head == "sense") {
        if (form.size() != 3) throw ParseError(file, form.line, "(sense \"lemma\" concept)");
        f.kind = RuleFormula::Kind::Sense;
        f.lemma = lowercase(form.at(1).str());
        f.concept_id = form.at(2).str();
        return f;
    }
    if (head == "hyp") {
        if (form.size() != 2) throw ParseError(file, form.line, "(hyp (pred args...))");
        f.kind = RuleFormula::Kind::Hyp;
        f.prop = parse_prop(form.at(1), file);
        return f;
    }
    if (head == "and") f.kind = RuleFormula::Kind::And;
    else if (head == "or") f.kind = RuleFormula::Kind::Or;
    else if (head == "xor") f.kind = RuleFormula::Kind::Xor;
    else if (head == "not") f.kind = RuleFormula::Kind::Not;
    else throw ParseError(file, form.line, "unknown formula operator '" + head + "'");
    for (size_t i = 1; i < form.size(); ++i)
        f.children.push_back(parse_rule_formula(form.at(i), file));
    if (f.kind == RuleFormula::Kind::Not && f.children.size() != 1)
        throw ParseError(file, form.line, "not takes one argument");
    return f;
}

RuleCond parse_cond(const Sexpr& form, const std::string& file) {
    RuleCond c;
    const std::string& head = form.head();
    if (head == "frame") {
        c.kind = RuleCond::Kind::Frame;
        if (form.size() < 2) throw ParseError(file, form.line, "(frame <type> ...)");
        c.a = form.at(1).str();
        size_t i = 2;
        if (i < form.size() && form.at(i).is_atom() && form.at(i).text.starts_with("?")) {
            c.b = form.at(i).text;  // optional frame variable
            i++;
        }
        for (; i < form.size(); ++i) {
            const Sexpr& r = form.at(i);
            if (r.head() != "role" || r.size() != 3)
                throw ParseError(file, r.line, "(role <name> <var-or-atom>)");
            c.roles.emplace_back(r.at(1).str(), r.at(2).str());
        }
    } else if (head == "word") {
        c.kind = RuleCond::Kind::Word;
        if (form.size() != 2) throw ParseError(file, form.line, "(word \"lemma\")");
        c.a = lowercase(form.at(1).str());
    } else if (head == "sense") {
        c.kind = RuleCond::Kind::Sense;
        if (form.size() != 3) throw ParseError(file, form.line, "(sense \"lemma\" concept)");
        c.a = lowercase(form.at(1).str());
        c.b = form.at(2).str();
    } else if (head == "entity") {
        c.kind = RuleCond::Kind::Entity;
        if (form.size() != 3) throw ParseError(file, form.line, "(entity <concept> ?var)");
        c.a = form.at(1).str();
        c.b = form.at(2).str();
    } else if (head == "head") {
        c.kind = RuleCond::Kind::Head;
        if (form.size() != 3) throw ParseError(file, form.line, "(head ?var \"lemma\")");
        c.a = form.at(1).str();
        c.b = lowercase(form.at(2).str());
    } else if (head == "topic") {
        c.kind = RuleCond::Kind::Topic;
        if (form.size() != 2) throw ParseError(file, form.line, "(topic ?var)");
        c.a = form.at(1).str();
    } else if (head == "hyp-true" || head == "hyp-false") {
        c.kind = head == "hyp-true" ? RuleCond::Kind::HypTrue : RuleCond::Kind::HypFalse;
        if (form.size() != 2) throw ParseError(file, form.line, "(" + head + " (pred args...))");
        c.prop = parse_prop(form.at(1), file);
    } else {
        throw ParseError(file, form.line, "unknown condition '" + head + "'");
    }
    return c;
}

}  // namespace

void AgentEngine::register_realm(Realm realm) {
    for (const auto& r : realms_)
        if (r.id == realm.id) throw std::runtime_error("duplicate realm id: " + realm.id);
    realms_.push_back(std::move(realm));
}

const Realm* AgentEngine::find_realm(const std::string& id) const {
    for (const auto& r : realms_)
        if (r.id == id) return &r;
    return nullptr;
}

void AgentEngine::parse_rules(const std::string& text, const std::string& file) {
    for (const Sexpr& form : parse_sexprs(text, file)) {
        if (form.head() != "rule" || form.size() < 3)
            throw ParseError(file, form.line, "expected (rule <realm> <id> ...)");
        AgentRule rule;
        rule.realm = form.at(1).str();
        rule.id = form.at(2).str();
        if (!find_realm(rule.realm))
            throw ParseError(file, form.line, "unknown realm '" + rule.realm + "'");
        for (size_t i = 3; i < form.size(); ++i) {
            const Sexpr& part = form.at(i);
            const std::string& head = part.head();
            if (head == "when") {
                for (size_t j = 1; j < part.size(); ++j)
                    rule.conds.push_back(parse_cond(part.at(j), file));
            } else if (head == "hyp") {
                if (part.size() != 4) throw ParseError(file, part.line, "(hyp <label> <kind> <prop>)");
                RuleHyp h;
                h.label = part.at(1).str();
                auto kind = hyp_kind_from_name(part.at(2).str());
                if (!kind) throw ParseError(file, part.line, "unknown hypothesis kind " + part.at(2).str());
                h.kind = *kind;
                h.prop = parse_prop(part.at(3), file);
                rule.hyps.push_back(std::move(h));
            } else if (head == "soft") {
                if (part.size() != 3) throw ParseError(file, part.line, "(soft <weight> <formula>)");
                rule.soft.emplace_back(part.at(1).num(), parse_rule_formula(part.at(2), file));
            } else if (head == "hard") {
                if (part.size() != 2) throw ParseError(file, part.line, "(hard <formula>)");
                rule.hard.push_back(parse_rule_formula(part.at(1), file));
            } else if (head == "group") {
                if (part.size() < 3) throw ParseError(file, part.line, "(group <name> <atom>...)");
                std::vector<RuleFormula> members;
                for (size_t j = 2; j < part.size(); ++j)
                    members.push_back(parse_rule_formula(part.at(j), file));
                rule.groups.emplace_back(part.at(1).str(), std::move(members));
            } else if (head == "because") {
                if (part.size() != 3) throw ParseError(file, part.line, "(because <effect> <cause>)");
                rule.because.emplace_back(parse_rule_formula(part.at(1), file),
                                          parse_rule_formula(part.at(2), file));
            } else {
                throw ParseError(file, part.line, "unknown rule part '" + head + "'");
            }
        }
        rules_.push_back(std::move(rule));
    }
}

void AgentEngine::load_rules(const std::string& path) {
    parse_rules(read_text_file(path), path);
}

// ---------------------------------------------------------------------------
// Choice hypotheses

void AgentEngine::emit_lexical_choices(ProposeContext& ctx) const {
    const SentenceAnalysis& sa = *ctx.sa;
    HypothesisStore& hyps = *ctx.hyps;
    ConstraintStore& cons = *ctx.constraints;

    // one sense hypothesis per reading of each ambiguous word
    std::set<std::string> seen;
    for (const auto& u : sa.units) {
        if (!u.entry || u.entry->senses.size() < 2) continue;
        std::string group = "sense:" + dashed(u.entry->lemma) + ":" +
                            std::string(is_verb(u.entry->pos) ? "v" : is_noun(u.entry->pos) ? "n" : "x");
        if (!seen.insert(group).second) continue;
        for (const auto& s : u.entry->senses) {
            int id = hyps.propose("lexical", "", HypKind::SenseChoice,
                                  sense_prop(u.entry->lemma, s.concept_id), "", ctx.sentence);
            cons.add_to_group(group, id);
        }
    }

    // referent hypotheses per anaphor; no candidate means a fresh entity
    for (const auto& a : sa.anaphors) {
        std::vector<AnaphorCandidate> cands = anaphor_candidates(*ctx.kb, *ctx.registry, a);
        if (cands.empty()) {
            if (DiscourseEntity* e = ctx.registry->find(a.id)) e->anaphor = false;
            continue;
        }
        for (const auto& c : cands) {
            int id = hyps.propose("reference", "", HypKind::ReferentChoice,
                                  Proposition{"refers-to", {a.id, c.entity}}, "", ctx.sentence);
            cons.add_to_group("ref:" + a.id, id);
            cons.add_soft(0.25 * c.salience, Formula::variable(id), "salience",
                          "sal:" + a.id + ":" + c.entity);
        }
    }

    // attachment readings: same verb sense, same group, different role maps
    std::map<std::pair<int, ConceptId>, std::vector<const Frame*>> by_sense;
    for (const auto& f : sa.frames) by_sense[{f.group, f.verb_sense}].push_back(&f);
    for (const auto& [key, frames] : by_sense) {
        if (frames.size() < 2) continue;
        std::string group = "attach:s" + std::to_string(sa.sentence) + ":g" +
                            std::to_string(key.first) + ":" + key.second;
        for (const Frame* f : frames) {
            int id = hyps.propose("parse", "", HypKind::AttachmentChoice,
                                  Proposition{"reading-of", {"frame" + std::to_string(f->id)}}, "",
                                  ctx.sentence);
            cons.add_to_group(group, id);
        }
    }

    // selectional fit feeds settlement weights through each frame's gates
    for (const auto& f : sa.frames) {
        if (!(f.fit > 0)) continue;
        std::vector<Formula> gates;
        if (const Hypothesis* s = hyps.find_prop("lexical", sense_prop(f.verb_lemma, f.verb_sense)))
            gates.push_back(Formula::variable(s->id));
        if (const Hypothesis* r = hyps.find_prop(
                "parse", Proposition{"reading-of", {"frame" + std::to_string(f.id)}}))
            gates.push_back(Formula::variable(r->id));
        if (gates.empty()) continue;
        Formula gate = gates.size() == 1 ? gates[0] : Formula::conj(gates);
        cons.add_soft(f.fit, gate, "selectional-fit", "fit:frame" + std::to_string(f.id));
    }
}

// ---------------------------------------------------------------------------
// Rule matching

namespace {

using Binding = std::map<std::string, std::string>;

bool is_var(const std::string& s) { return !s.empty() && s[0] == '?'; }

std::string substitute(const std::string& atom, const Binding& binding,
                       const std::function<std::string(const std::string&)>& chase) {
    if (!is_var(atom)) return atom;
    auto it = binding.find(atom);
    if (it == binding.end()) throw std::runtime_error("unbound variable " + atom);
    return chase ? chase(it->second) : it->second;
}

Proposition substitute_prop(const Proposition& tmpl, const Binding& binding,
                            const std::function<std::string(const std::string&)>& chase) {
    Proposition p;
    p.predicate = tmpl.predicate;
    for (const auto& a : tmpl.args) p.args.push_back(substitute(a, binding, chase));
    return p;
}

struct RuleRunner {
    const AgentRule& rule;
    ProposeContext& ctx;

    std::string chase(const std::string& id) const { return ctx.chase ? ctx.chase(id) : id; }

    bool same_entity(const std::string& a, const std::string& b) const {
        return chase(a) == chase(b);
    }

    bool entity_matches_concept(const std::string& entity, const ConceptId& concept_id) const {
        const DiscourseEntity* e = ctx.registry ? ctx.registry->find(chase(entity)) : nullptr;
        if (!e) return false;
        for (const auto& c : e->concepts)
            if (ctx.kb->has_concept(c) && ctx.kb->has_concept(concept_id) &&
                ctx.kb->specializes(c, concept_id))
                return true;
        return false;
    }

    bool filler_matches(const RoleFiller& filler, const std::string& atom) const {
        std::string value = filler.text();
        if (value == atom) return true;
        if (filler.kind == RoleFiller::Kind::Concept)
            return ctx.kb->has_concept(value) && ctx.kb->has_concept(atom) &&
                   ctx.kb->specializes(value, atom);
        if (filler.kind == RoleFiller::Kind::Entity)
            return same_entity(value, atom) || entity_matches_concept(value, atom);
        return false;
    }

    bool bind(Binding& b, const std::string& var, const std::string& value) const {
        auto it = b.find(var);
        if (it != b.end()) return same_entity(it->second, value);
        b[var] = value;
        return true;
    }

    std::vector<Binding> apply_cond(const RuleCond& cond, const std::vector<Binding>& in) const {
        std::vector<Binding> out;
        switch (cond.kind) {
            case RuleCond::Kind::Frame: {
                if (!ctx.sa) return {};
                for (const auto& binding : in) {
                    for (const auto& f : ctx.sa->frames) {
                        bool type_ok = f.frame_type == cond.a ||
                                       (ctx.kb->has_concept(f.frame_type) && ctx.kb->has_concept(cond.a) &&
                                        ctx.kb->specializes(f.frame_type, cond.a));
                        if (!type_ok) continue;
                        Binding b = binding;
                        bool ok = true;
                        if (!cond.b.empty() && !bind(b, cond.b, "frame" + std::to_string(f.id))) ok = false;
                        for (const auto& [role, arg] : cond.roles) {
                            if (!ok) break;
                            auto it = f.roles.find(role);
                            if (it == f.roles.end()) {
                                ok = false;
                                break;
                            }
                            if (is_var(arg)) {
                                if (!bind(b, arg, it->second.text())) ok = false;
                            } else if (!filler_matches(it->second, arg)) {
                                ok = false;
                            }
                        }
                        if (ok) out.push_back(std::move(b));
                    }
                }
                return out;
            }
            case RuleCond::Kind::Word: {
                if (!ctx.sa) return {};
                bool found = false;
                for (const auto& u : ctx.sa->units)
                    if (u.lemma == cond.a || lowercase(u.surface) == cond.a) found = true;
                return found ? in : std::vector<Binding>{};
            }
            case RuleCond::Kind::Sense: {
                const Hypothesis* h = ctx.hyps->find_prop("lexical", sense_prop(cond.a, cond.b));
                return (h && !h->retired) ? in : std::vector<Binding>{};
            }
            case RuleCond::Kind::Entity: {
                for (const auto& binding : in) {
                    for (const auto* e : ctx.registry->in_order()) {
                        if (e->anaphor) continue;
                        bool match = false;
                        for (const auto& c : e->concepts)
                            if (ctx.kb->has_concept(c) && ctx.kb->has_concept(cond.a) &&
                                ctx.kb->specializes(c, cond.a))
                                match = true;
                        if (!match) continue;
                        Binding b = binding;
                        if (bind(b, cond.b, e->id)) out.push_back(std::move(b));
                    }
                }
                return out;
            }
            case RuleCond::Kind::Head: {
                for (const auto& binding : in) {
                    auto it = binding.find(cond.a);
                    if (it == binding.end()) continue;
                    const DiscourseEntity* e = ctx.registry->find(chase(it->second));
                    if (e && e->head_lemma == cond.b) out.push_back(binding);
                }
                return out;
            }
            case RuleCond::Kind::Topic: {
                const DiscourseEntity* topic = nullptr;
                for (const auto* e : ctx.registry->in_order())
                    if (!e->anaphor) {
                        topic = e;
                        break;
                    }
                if (!topic) return {};
                for (const auto& binding : in) {
                    Binding b = binding;
                    if (bind(b, cond.a, topic->id)) out.push_back(std::move(b));
                }
                return out;
            }
            case RuleCond::Kind::HypTrue: {
                for (const auto& binding : in) {
                    for (const auto* h : ctx.hyps->live()) {
                        if (h->prop.predicate != cond.prop.predicate ||
                            h->prop.args.size() != cond.prop.args.size())
                            continue;
                        if (!ctx.truth) continue;
                        auto tv = ctx.truth->find(h->id);
                        if (tv == ctx.truth->end() || !tv->second) continue;
                        Binding b = binding;
                        bool ok = true;
                        for (size_t i = 0; i < cond.prop.args.size() && ok; ++i) {
                            const std::string& arg = cond.prop.args[i];
                            if (is_var(arg)) {
                                if (!bind(b, arg, h->prop.args[i])) ok = false;
                            } else if (!same_entity(arg, h->prop.args[i])) {
                                ok = false;
                            }
                        }
                        if (ok) out.push_back(std::move(b));
                    }
                }
                return out;
            }
            case RuleCond::Kind::HypFalse: {
                for (const auto& binding : in) {
                    Proposition p;
                    try {
                        p = substitute_prop(cond.prop, binding, ctx.chase);
                    } catch (const std::exception&) {
                        continue;  // unbound variable in a negative condition
                    }
                    bool truth = false;
                    for (const auto* h : ctx.hyps->live()) {
                        if (h->prop.predicate != p.predicate || h->prop.args.size() != p.args.size())
                            continue;
                        bool same = true;
                        for (size_t i = 0; i < p.args.size(); ++i)
                            if (!same_entity(p.args[i], h->prop.args[i])) same = false;
                        if (!same) continue;
                        if (ctx.truth) {
                            auto tv = ctx.truth->find(h->id);
                            if (tv != ctx.truth->end() && tv->second) truth = true;
                        }
                    }
                    if (!truth) out.push_back(binding);
                }
                return out;
            }
        }
        return out;
    }

    // Resolves a rule formula against the store; nullopt when the formula
    // collapses to a constant (constraint skipped).
    struct Resolved {
        bool is_const = false;
        bool value = false;
        Formula formula;
    };

    Resolved resolve(const RuleFormula& rf, const std::map<std::string, int>& labels,
                     const Binding& binding) const {
        Resolved r;
        switch (rf.kind) {
            case RuleFormula::Kind::Label: {
                auto it = labels.find(rf.label);
                if (it == labels.end())
                    throw std::runtime_error("rule " + rule.id + ": unknown label '" + rf.label + "'");
                r.formula = Formula::variable(it->second);
                return r;
            }
            case RuleFormula::Kind::Sense: {
                const Hypothesis* h = ctx.hyps->find_prop("lexical", sense_prop(rf.lemma, rf.concept_id));
                if (!h) {
                    // unambiguous words have no sense hypothesis: the reading
                    // holds iff the word's entry carries that sense
                    const LexEntry* noun = ctx.lex ? ctx.lex->find(rf.lemma, Pos::NN) : nullptr;
                    const LexEntry* verb = ctx.lex ? ctx.lex->find(rf.lemma, Pos::VB) : nullptr;
                    bool holds = false;
                    for (const LexEntry* e : {noun, verb})
                        if (e)
                            for (const auto& s : e->senses)
                                if (s.concept_id == rf.concept_id) holds = true;
                    r.is_const = true;
                    r.value = holds;
                    return r;
                }
                r.formula = Formula::variable(h->id);
                return r;
            }
            case RuleFormula::Kind::Hyp: {
                Proposition p = substitute_prop(rf.prop, binding, ctx.chase);
                const Hypothesis* h = ctx.hyps->find_prop_any(p);
                if (!h) {
                    r.is_const = true;
                    r.value = false;
                    return r;
                }
                r.formula = Formula::variable(h->id);
                return r;
            }
            case RuleFormula::Kind::Not: {
                Resolved c = resolve(rf.children[0], labels, binding);
                if (c.is_const) {
                    r.is_const = true;
                    r.value = !c.value;
                    return r;
                }
                r.formula = Formula::negate(std::move(c.formula));
                return r;
            }
            case RuleFormula::Kind::And:
            case RuleFormula::Kind::Or:
            case RuleFormula::Kind::Xor: {
                std::vector<Formula> parts;
                for (const auto& child : rf.children) {
                    Resolved c = resolve(child, labels, binding);
                    if (c.is_const) {
                        if (rf.kind == RuleFormula::Kind::And && !c.value) {
                            r.is_const = true;
                            r.value = false;
                            return r;
                        }
                        if (rf.kind == RuleFormula::Kind::Or && c.value) {
                            r.is_const = true;
                            r.value = true;
                            return r;
                        }
                        if (rf.kind == RuleFormula::Kind::Xor) {
                            // constants inside exactly-one do not simplify cleanly
                            r.is_const = true;
                            r.value = false;
                            return r;
                        }
                        continue;  // neutral element dropped
                    }
                    parts.push_back(std::move(c.formula));
                }
                if (parts.empty()) {
                    r.is_const = true;
                    r.value = rf.kind == RuleFormula::Kind::And;
                    return r;
                }
                if (parts.size() == 1) {
                    r.formula = std::move(parts[0]);
                    return r;
                }
                r.formula = rf.kind == RuleFormula::Kind::And   ? Formula::conj(std::move(parts))
                            : rf.kind == RuleFormula::Kind::Or  ? Formula::disj(std::move(parts))
                                                                : Formula::exactly_one(std::move(parts));
                return r;
            }
        }
        return r;
    }

    std::optional<int> resolve_id(const RuleFormula& rf, const std::map<std::string, int>& labels,
                                  const Binding& binding) const {
        Resolved r = resolve(rf, labels, binding);
        if (r.is_const || r.formula.kind != Formula::Kind::Var) return std::nullopt;
        return r.formula.var;
    }

    void fire(const Binding& binding, const Realm& realm, UAReport& report) const {
        std::map<std::string, int> labels;
        std::string instance;
        if (realm.per_person) {
            auto it = binding.find("?p");
            if (it != binding.end()) instance = chase(it->second);
        }
        for (const auto& rh : rule.hyps) {
            Proposition p = substitute_prop(rh.prop, binding, ctx.chase);
            int id = ctx.hyps->propose(rule.realm, instance, rh.kind, std::move(p), rule.id,
                                       ctx.sentence);
            labels[rh.label] = id;
            report.hypotheses.push_back(id);
        }
        for (const auto& [name_tmpl, members] : rule.groups) {
            std::string name = name_tmpl;
            for (const auto& [var, value] : binding) {
                size_t pos;
                while ((pos = name.find(var)) != std::string::npos)
                    name.replace(pos, var.size(), chase(value));
            }
            for (const auto& m : members)
                if (auto id = resolve_id(m, labels, binding)) ctx.constraints->add_to_group(name, *id);
        }
        for (const auto& [weight, rf] : rule.soft) {
            Resolved r = resolve(rf, labels, binding);
            if (r.is_const) continue;
            int cid = ctx.constraints->add_soft(weight, r.formula, rule.id,
                                                rule.id + "|" + r.formula.to_string());
            if (cid) report.constraints.push_back(cid);
        }
        for (const auto& rf : rule.hard) {
            Resolved r = resolve(rf, labels, binding);
            if (r.is_const) {
                if (!r.value)
                    throw std::runtime_error("rule " + rule.id + ": hard constraint is constant false");
                continue;
            }
            int cid = ctx.constraints->add_hard(r.formula, rule.id,
                                                rule.id + "|hard|" + r.formula.to_string());
            if (cid) report.constraints.push_back(cid);
        }
        for (const auto& [effect, cause] : rule.because) {
            auto eid = resolve_id(effect, labels, binding);
            auto cid = resolve_id(cause, labels, binding);
            if (eid && cid) {
                ctx.constraints->add_link(*ctx.hyps, *cid, *eid, rule.id);
                report.links.push_back({*cid, *eid, rule.id});
            }
        }
    }

    void run(const Realm& realm, UAReport& report) const {
        std::vector<Binding> bindings{Binding{}};
        for (const auto& cond : rule.conds) {
            bindings = apply_cond(cond, bindings);
            if (bindings.empty()) return;
        }
        for (const auto& b : bindings) fire(b, realm, report);
    }
};

}  // namespace

UAReport AgentEngine::propose_realm(const std::string& realm_id, ProposeContext& ctx) const {
    const Realm* realm = find_realm(realm_id);
    if (!realm) throw std::runtime_error("unknown realm: " + realm_id);
    UAReport report;
    report.realm = realm_id;
    for (const auto& rule : rules_) {
        if (rule.realm != realm_id) continue;
        RuleRunner runner{rule, ctx};
        runner.run(*realm, report);
    }
    return report;
}

std::vector<UAReport> AgentEngine::propose_all(ProposeContext& ctx) const {
    std::vector<std::string> ids;
    for (const auto& r : realms_) ids.push_back(r.id);
    std::sort(ids.begin(), ids.end());
    std::vector<UAReport> reports;
    for (const auto& id : ids) {
        UAReport report = propose_realm(id, ctx);
        if (!report.hypotheses.empty() || !report.constraints.empty() || !report.links.empty())
            reports.push_back(std::move(report));
    }
    return reports;
}

std::vector<std::string> AgentEngine::instances_of(const HypothesisStore& hyps,
                                                   const std::string& realm) const {
    std::set<std::string> set;
    for (const auto& h : hyps.all())
        if (h.realm == realm && !h.instance.empty()) set.insert(h.instance);
    return {set.begin(), set.end()};
}

}  // namespace deepread
