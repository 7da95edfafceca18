#include "deepread/kb.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

#include "deepread/sexpr.hpp"

namespace deepread {

namespace {

const std::pair<Relation, const char*> kRelationNames[] = {
    {Relation::Ako, "ako"},
    {Relation::Isa, "isa"},
    {Relation::PartOf, "part-of"},
    {Relation::MaterialOf, "material-of"},
    {Relation::UsedFor, "used-for"},
    {Relation::UsedAt, "used-at"},
    {Relation::ColorOf, "color-of"},
    {Relation::SizeOf, "size-of"},
    {Relation::DurationOf, "duration-of"},
    {Relation::TypicalSubjectOf, "typical-subject-of"},
    {Relation::TypicalObjectOf, "typical-object-of"},
    {Relation::Implies, "implies"},
    {Relation::Causes, "causes"},
};

}  // namespace

std::string relation_name(Relation r) {
    for (const auto& [rel, name] : kRelationNames)
        if (rel == r) return name;
    return "?";
}

std::optional<Relation> relation_from_name(const std::string& name) {
    for (const auto& [rel, rel_name] : kRelationNames)
        if (name == rel_name) return rel;
    return std::nullopt;
}

bool relation_takes_magnitude(Relation r) {
    return r == Relation::SizeOf || r == Relation::DurationOf;
}

const std::string& Concept::display() const {
    return names.empty() ? id : names.front();
}

const Concept& KnowledgeBase::concept_of(const ConceptId& id) const {
    auto it = concepts_.find(id);
    if (it == concepts_.end()) throw std::runtime_error("unknown concept: " + id);
    return it->second;
}

Concept& KnowledgeBase::ensure_concept(const ConceptId& id, bool implicit) {
    auto it = concepts_.find(id);
    if (it != concepts_.end()) {
        if (!implicit) it->second.implicit = false;
        return it->second;
    }
    Concept c;
    c.id = id;
    c.implicit = implicit;
    return concepts_.emplace(id, std::move(c)).first->second;
}

void KnowledgeBase::check_no_ako_cycle(const ConceptId& source, const ConceptId& target) const {
    // adding source -ako-> target creates a cycle iff target already reaches source
    if (source == target) throw std::runtime_error("ako cycle: " + source + " -> " + target);
    if (concepts_.count(target) && specializes(target, source))
        throw std::runtime_error("ako cycle through " + source + " and " + target);
}

std::vector<ConceptId> KnowledgeBase::ancestors(const ConceptId& id) const {
    if (!has_concept(id)) throw std::runtime_error("unknown concept: " + id);
    std::vector<ConceptId> order;
    std::set<ConceptId> seen;
    std::deque<ConceptId> queue{id};
    seen.insert(id);
    while (!queue.empty()) {
        ConceptId current = queue.front();
        queue.pop_front();
        order.push_back(current);
        auto it = ako_up_.find(current);
        if (it == ako_up_.end()) continue;
        for (const auto& parent : it->second)
            if (seen.insert(parent).second) queue.push_back(parent);
    }
    return order;
}

bool KnowledgeBase::specializes(const ConceptId& sub, const ConceptId& super) const {
    if (!has_concept(sub)) throw std::runtime_error("unknown concept: " + sub);
    if (!has_concept(super)) throw std::runtime_error("unknown concept: " + super);
    if (sub == super) return true;
    for (const auto& a : ancestors(sub))
        if (a == super) return true;
    return false;
}

std::vector<QueryHit> KnowledgeBase::query(Relation kind, const ConceptId& source) const {
    if (!has_concept(source)) throw std::runtime_error("unknown concept: " + source);

    // BFS distance to each ancestor; property asserted of a nearer ancestor
    // wins when the same target carries conflicting magnitudes.
    std::map<ConceptId, int> distance;
    {
        int d = 0;
        std::vector<ConceptId> frontier{source};
        distance[source] = 0;
        while (!frontier.empty()) {
            d++;
            std::vector<ConceptId> next;
            for (const auto& c : frontier) {
                auto it = ako_up_.find(c);
                if (it == ako_up_.end()) continue;
                for (const auto& parent : it->second)
                    if (!distance.count(parent)) {
                        distance[parent] = d;
                        next.push_back(parent);
                    }
            }
            frontier = std::move(next);
        }
    }

    std::map<ConceptId, QueryHit> hits;
    for (const auto& [holder, dist] : distance) {
        if (kind == Relation::Isa && holder != source) continue;  // instance link, not inherited
        auto it = by_source_.find({kind, holder});
        if (it == by_source_.end()) continue;
        for (const auto& a : it->second) {
            auto existing = hits.find(a.target);
            QueryHit hit{a.target, a.magnitude, dist};
            if (existing == hits.end()) {
                hits.emplace(a.target, std::move(hit));
            } else if (dist < existing->second.distance ||
                       (dist == existing->second.distance && a.magnitude && existing->second.magnitude &&
                        *a.magnitude < *existing->second.magnitude)) {
                existing->second = std::move(hit);
            }
        }
    }

    std::vector<QueryHit> out;
    out.reserve(hits.size());
    for (auto& [target, hit] : hits) out.push_back(std::move(hit));
    return out;  // std::map iteration is already lexicographic by target
}

KnowledgeBase assert_fact(KnowledgeBase kb, const Assertion& a) {
    if (kb.assertions_.count(a)) return kb;
    if (a.kind == Relation::Ako) kb.check_no_ako_cycle(a.source, a.target);
    if (relation_takes_magnitude(a.kind) != a.magnitude.has_value())
        throw std::runtime_error("magnitude is " + std::string(a.magnitude ? "not allowed" : "required") +
                                 " for " + relation_name(a.kind));
    kb.ensure_concept(a.source, true);
    kb.ensure_concept(a.target, true);
    kb.assertions_.insert(a);
    kb.by_source_[{a.kind, a.source}].push_back(a);
    if (a.kind == Relation::Ako) kb.ako_up_[a.source].push_back(a.target);
    return kb;
}

void add_script(KnowledgeBase& kb, Script script) {
    std::set<std::string> roles(script.roles.begin(), script.roles.end());
    for (const auto& ev : script.events)
        for (const auto& r : ev.role_refs)
            if (!roles.count(r))
                throw std::runtime_error("script " + script.id + " event references undeclared role " + r);
    kb.ensure_concept(script.id, true);
    kb.scripts_[script.id] = std::move(script);
}

namespace {

Script parse_script(const Sexpr& form, const std::string& file) {
    if (form.size() < 2) throw ParseError(file, form.line, "script needs an id");
    Script s;
    s.id = form.at(1).str();
    for (size_t i = 2; i < form.size(); ++i) {
        const Sexpr& part = form.at(i);
        if (!part.is_list()) throw ParseError(file, part.line, "script parts must be lists");
        const std::string& head = part.head();
        if (head == "roles") {
            for (size_t j = 1; j < part.size(); ++j) s.roles.push_back(part.at(j).str());
        } else if (head == "event") {
            if (part.size() < 3) throw ParseError(file, part.line, "event needs order and predicate");
            ScriptEvent ev;
            ev.order = static_cast<int>(part.at(1).num());
            ev.predicate = part.at(2).str();
            for (size_t j = 3; j < part.size(); ++j) ev.role_refs.push_back(part.at(j).str());
            s.events.push_back(std::move(ev));
        } else if (head == "pre" || head == "post") {
            if (part.size() < 2) throw ParseError(file, part.line, head + " needs a predicate");
            ScriptTemplate t;
            t.predicate = part.at(1).str();
            for (size_t j = 2; j < part.size(); ++j) t.args.push_back(part.at(j).str());
            (head == "pre" ? s.preconditions : s.postconditions).push_back(std::move(t));
        } else {
            throw ParseError(file, part.line, "unknown script part '" + head + "'");
        }
    }
    std::stable_sort(s.events.begin(), s.events.end(),
                     [](const ScriptEvent& a, const ScriptEvent& b) { return a.order < b.order; });
    return s;
}

}  // namespace

void merge_kb_text(KnowledgeBase& kb, const std::string& text, const std::string& file) {
    for (const Sexpr& form : parse_sexprs(text, file)) {
        if (!form.is_list() || form.items.empty())
            throw ParseError(file, form.line, "expected a (...) form");
        const std::string& head = form.head();
        try {
            if (head == "concept") {
                if (form.size() < 2) throw std::runtime_error("concept needs an id");
                Concept& c = kb.ensure_concept(form.at(1).str(), false);
                for (size_t i = 2; i < form.size(); ++i) {
                    const Sexpr& item = form.at(i);
                    if (item.is_string())
                        c.names.push_back(item.text);
                    else if (item.is_list() && item.head() == "gloss" && item.size() == 2)
                        c.gloss = item.at(1).str();
                    else
                        throw std::runtime_error("concept takes name strings and (gloss \"...\")");
                }
            } else if (head == "script") {
                add_script(kb, parse_script(form, file));
            } else if (auto rel = relation_from_name(head)) {
                if (form.size() < 3) throw std::runtime_error(head + " needs source and target");
                Assertion a;
                a.kind = *rel;
                a.source = form.at(1).str();
                a.target = form.at(2).str();
                if (relation_takes_magnitude(*rel)) {
                    if (form.size() != 5) throw std::runtime_error(head + " needs magnitude and unit");
                    a.magnitude = Magnitude{form.at(3).num(), form.at(4).str()};
                } else if (form.size() != 3) {
                    throw std::runtime_error(head + " takes exactly source and target");
                }
                kb = assert_fact(std::move(kb), a);
            } else {
                throw std::runtime_error("unknown form '" + head + "'");
            }
        } catch (const ParseError&) {
            throw;
        } catch (const std::exception& e) {
            throw ParseError(file, form.line, e.what());
        }
    }
}

KnowledgeBase parse_kb(const std::string& text, const std::string& file) {
    KnowledgeBase kb;
    merge_kb_text(kb, text, file);
    return kb;
}

KnowledgeBase load_kb(const std::string& path) {
    return parse_kb(read_text_file(path), path);
}

KnowledgeBase load_kb(const std::vector<std::string>& paths) {
    KnowledgeBase kb;
    for (const auto& p : paths) merge_kb_text(kb, read_text_file(p), p);
    return kb;
}

std::string save_kb(const KnowledgeBase& kb) {
    std::ostringstream out;
    for (const auto& [id, c] : kb.concepts()) {
        if (c.implicit && c.names.empty() && c.gloss.empty()) continue;
        out << "(concept " << id;
        for (const auto& n : c.names) out << " \"" << n << "\"";
        if (!c.gloss.empty()) out << " (gloss \"" << c.gloss << "\")";
        out << ")\n";
    }
    for (const auto& a : kb.assertions()) {
        out << "(" << relation_name(a.kind) << " " << a.source << " " << a.target;
        if (a.magnitude) {
            out << " " << a.magnitude->value << " " << a.magnitude->unit;
        }
        out << ")\n";
    }
    for (const auto& [id, s] : kb.scripts()) {
        out << "(script " << id << " (roles";
        for (const auto& r : s.roles) out << " " << r;
        out << ")";
        for (const auto& ev : s.events) {
            out << " (event " << ev.order << " " << ev.predicate;
            for (const auto& r : ev.role_refs) out << " " << r;
            out << ")";
        }
        for (const auto& t : s.preconditions) {
            out << " (pre " << t.predicate;
            for (const auto& a2 : t.args) out << " " << a2;
            out << ")";
        }
        for (const auto& t : s.postconditions) {
            out << " (post " << t.predicate;
            for (const auto& a2 : t.args) out << " " << a2;
            out << ")";
        }
        out << ")\n";
    }
    return out.str();
}

}  // namespace deepread
