#include "deepread/qa.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>
#include <sstream>

#include "deepread/sexpr.hpp"

namespace deepread {

namespace {

const std::pair<QueryKind, const char*> kQueryNames[] = {
    {QueryKind::HolderOf, "holder-of"},
    {QueryKind::LocationOf, "location-of"},
    {QueryKind::GoalOf, "goal-of"},
    {QueryKind::Wanted, "wanted"},
    {QueryKind::Feel, "feel"},
    {QueryKind::Liked, "liked"},
    {QueryKind::Transferred, "transferred"},
    {QueryKind::ConcordConflict, "concord-conflict"},
    {QueryKind::Why, "why"},
    {QueryKind::CounterfactualRemove, "counterfactual-remove"},
};

const char* kTemplates =
    "supported question templates:\n"
    "  Who had <thing> at the end?\n"
    "  Who had <thing> at the beginning?\n"
    "  Did <person> want to be <verb>ed?\n"
    "  Where was <thing> at the end?\n"
    "  How did <person> feel?\n"
    "  Did <person> like <person>?\n"
    "  Who transferred <thing>?\n"
    "  What was the goal of <person>?\n"
    "  Why was <person> angry at <person>?\n"
    "  Were the goals of <person> and <person> in concord or conflict?\n"
    "  What would have happened if <person> had not <verb>ed ...?\n"
    "  (?<kind> <arg>...) structured form";

std::string strip_digits(const std::string& s) {
    std::string out;
    for (char c : s)
        if (std::isdigit(static_cast<unsigned char>(c))) out.push_back(c);
    return out;
}

std::vector<std::string> words_of(const std::string& text) {
    std::vector<std::string> out;
    std::string w;
    for (char c : text) {
        if (std::isalnum(static_cast<unsigned char>(c)) || c == '$' || c == ',' || c == '\'') {
            w.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        } else if (!w.empty()) {
            out.push_back(w);
            w.clear();
        }
    }
    if (!w.empty()) out.push_back(w);
    return out;
}

}  // namespace

std::string query_kind_name(QueryKind k) {
    for (const auto& [kind, name] : kQueryNames)
        if (kind == k) return name;
    return "?";
}

std::optional<QueryKind> query_kind_from_name(const std::string& name) {
    for (const auto& [kind, kname] : kQueryNames)
        if (name == kname) return kind;
    return std::nullopt;
}

std::optional<std::string> resolve_entity_ref(const Discourse& d, const std::string& ref) {
    const EntityRegistry& reg = d.registry();
    if (reg.find(ref)) return d.chase(ref);

    std::string digits = strip_digits(ref);
    std::vector<std::string> ref_words = words_of(ref);
    std::vector<std::string> content;
    for (const auto& w : ref_words)
        if (w != "the" && w != "a" && w != "an" && w != "mr" && w != "mrs" && w != "ms")
            content.push_back(w);
    if (content.empty()) return std::nullopt;

    const DiscourseEntity* best = nullptr;
    for (const auto* e : reg.in_order()) {
        if (e->anaphor) continue;
        bool match = false;
        if (!digits.empty() && !e->name.empty() && strip_digits(e->name) == digits) match = true;
        if (!match && !e->name.empty()) {
            std::vector<std::string> name_words = words_of(e->name);
            bool all = true;
            for (const auto& w : content)
                if (std::find(name_words.begin(), name_words.end(), w) == name_words.end()) all = false;
            if (all) match = true;
        }
        if (!match && content.size() == 1) {
            std::string w = content[0];
            std::string singular = w.size() > 1 && w.back() == 's' ? w.substr(0, w.size() - 1) : w;
            if (e->head_lemma == w || e->head_lemma == singular) match = true;
            if (!match) {
                const LexEntry* noun = d.lexicon().find(singular, Pos::NN);
                if (noun) {
                    for (const auto& s : noun->senses)
                        for (const auto& c : e->concepts)
                            if (d.kb().has_concept(c) && d.kb().has_concept(s.concept_id) &&
                                d.kb().specializes(c, s.concept_id))
                                match = true;
                }
            }
        }
        if (match && (!best || e->last_mention >= best->last_mention)) best = e;
    }
    if (!best) return std::nullopt;
    return d.chase(best->id);
}

// ---------------------------------------------------------------------------
// Question parsing

namespace {

std::string require_entity(const Discourse& d, const std::string& ref) {
    auto e = resolve_entity_ref(d, ref);
    if (!e) throw std::runtime_error("unknown entity in query: " + ref);
    return *e;
}

std::string verb_lemma_of(const Discourse& d, const std::string& word) {
    for (const auto& r : d.lexicon().readings(word))
        if (is_verb(r.pos)) return r.lemma;
    return word;
}

bool match_template(const std::vector<std::string>& pattern, const std::vector<std::string>& words,
                    std::vector<std::string>& slots) {
    slots.clear();
    std::function<bool(size_t, size_t)> rec = [&](size_t p, size_t w) -> bool {
        if (p == pattern.size()) return w == words.size();
        if (pattern[p] == "*") {
            for (size_t take = 1; w + take <= words.size(); ++take) {
                std::string captured;
                for (size_t i = 0; i < take; ++i) {
                    if (i) captured += " ";
                    captured += words[w + i];
                }
                slots.push_back(captured);
                if (rec(p + 1, w + take)) return true;
                slots.pop_back();
            }
            return false;
        }
        if (w < words.size() && pattern[p] == words[w]) return rec(p + 1, w + 1);
        return false;
    };
    return rec(0, 0);
}

std::vector<std::string> split_words(const std::string& s) {
    std::istringstream ss(s);
    std::vector<std::string> out;
    std::string w;
    while (ss >> w) out.push_back(w);
    return out;
}

}  // namespace

QueryForm parse_question(const Discourse& d, const std::string& text) {
    std::string trimmed = text;
    while (!trimmed.empty() && std::isspace(static_cast<unsigned char>(trimmed.front())))
        trimmed.erase(trimmed.begin());

    if (!trimmed.empty() && trimmed[0] == '(') {
        std::vector<Sexpr> forms = parse_sexprs(trimmed, "<question>");
        if (forms.size() != 1 || !forms[0].is_list() || forms[0].items.empty())
            throw UnparseableQuestion("expected a single (?kind args...) form");
        std::string head = forms[0].at(0).str();
        if (!head.empty() && head[0] == '?') head = head.substr(1);
        auto kind = query_kind_from_name(head);
        if (!kind) throw UnparseableQuestion("unknown query kind '" + head + "'\n" + kTemplates);
        QueryForm form;
        form.kind = *kind;
        for (size_t i = 1; i < forms[0].size(); ++i) {
            std::string arg = forms[0].at(i).str();
            // resolve entity-looking args; keep literals (end/begin/predicates)
            if (auto e = resolve_entity_ref(d, arg)) arg = *e;
            form.args.push_back(arg);
        }
        return form;
    }

    std::vector<std::string> words = words_of(text);
    std::vector<std::string> slots;
    auto tmpl = [&](const char* pattern) { return match_template(split_words(pattern), words, slots); };

    if (tmpl("who had * at the end")) return {QueryKind::HolderOf, {require_entity(d, slots[0]), "end"}};
    if (tmpl("who had * at the beginning") || tmpl("who had * before *"))
        return {QueryKind::HolderOf, {require_entity(d, slots[0]), "begin"}};
    if (tmpl("who has *")) return {QueryKind::HolderOf, {require_entity(d, slots[0]), "end"}};
    if (tmpl("did * want to be *"))
        return {QueryKind::Wanted,
                {require_entity(d, slots[0]), verb_lemma_of(d, split_words(slots[1])[0])}};
    if (tmpl("did * want to *"))
        return {QueryKind::Wanted,
                {require_entity(d, slots[0]), verb_lemma_of(d, split_words(slots[1])[0])}};
    if (tmpl("where was * at the end") || tmpl("where is *") || tmpl("where was *"))
        return {QueryKind::LocationOf, {require_entity(d, slots[0]), "end"}};
    if (tmpl("how did * feel")) return {QueryKind::Feel, {require_entity(d, slots[0])}};
    if (tmpl("did * like *"))
        return {QueryKind::Liked, {require_entity(d, slots[0]), require_entity(d, slots[1])}};
    if (tmpl("who transferred * to *") || tmpl("who transferred *"))
        return {QueryKind::Transferred, {require_entity(d, slots[0])}};
    if (tmpl("what was the goal of *") || tmpl("what did * want"))
        return {QueryKind::GoalOf, {require_entity(d, slots[0])}};
    if (tmpl("why was * angry at *"))
        return {QueryKind::Why, {"angry-at", require_entity(d, slots[0]), require_entity(d, slots[1])}};
    if (tmpl("were the goals of * and * in concord or conflict"))
        return {QueryKind::ConcordConflict, {require_entity(d, slots[0]), require_entity(d, slots[1])}};
    if (tmpl("what would have happened if * had not *")) {
        std::string verb = split_words(slots[1])[0];
        return {QueryKind::CounterfactualRemove,
                {require_entity(d, slots[0]), verb_lemma_of(d, verb)}};
    }
    throw UnparseableQuestion("cannot parse question: " + text + "\n" + kTemplates);
}

// ---------------------------------------------------------------------------
// Answering

namespace {

// Uniform view over the live discourse or a counterfactual/elaboration clone.
struct View {
    const Discourse* d = nullptr;
    const HypothesisStore* hyps = nullptr;
    const std::vector<CausalLink>* links = nullptr;
    const Assignment* truth = nullptr;

    bool is_true(int id) const {
        auto it = truth->find(id);
        return it != truth->end() && it->second;
    }

    std::vector<const Hypothesis*> true_with_predicate(const std::string& pred) const {
        std::vector<const Hypothesis*> out;
        for (const auto* h : hyps->live())
            if (h->prop.predicate == pred && is_true(h->id)) out.push_back(h);
        return out;
    }

    bool arg_is(const std::string& a, const std::string& b) const {
        return d->chase(a) == d->chase(b);
    }

    std::vector<int> why_chain(int effect) const {
        std::vector<int> chain;
        std::set<int> seen{effect};
        std::vector<int> frontier{effect};
        while (!frontier.empty()) {
            std::vector<int> next;
            for (int id : frontier)
                for (const auto& link : *links)
                    if (link.effect == id && seen.insert(link.cause).second) {
                        chain.push_back(link.cause);
                        next.push_back(link.cause);
                    }
            frontier = std::move(next);
        }
        return chain;
    }

    std::string render_prop(int id) const {
        const Hypothesis* h = hyps->find(id);
        if (!h) return "?";
        std::string s = h->prop.predicate;
        for (const auto& arg : h->prop.args) s += " " + d->render(arg);
        return s;
    }
};

Answer unknown_answer() {
    Answer a;
    a.status = Answer::Status::Unknown;
    a.payload = "unknown";
    return a;
}

Answer answer_direct(const View& v, const QueryForm& form) {
    Answer a;
    switch (form.kind) {
        case QueryKind::HolderOf: {
            if (form.args.empty()) throw std::runtime_error("holder-of needs a thing");
            std::string thing = v.d->chase(form.args[0]);
            bool begin = form.args.size() > 1 && form.args[1] == "begin";
            const Hypothesis* best = nullptr;
            for (const auto* h : v.true_with_predicate(begin ? "had-before" : "has")) {
                if (h->prop.args.size() != 2 || !v.arg_is(h->prop.args[1], thing)) continue;
                if (!best || (begin ? h->sentence < best->sentence : h->sentence >= best->sentence))
                    best = h;
            }
            if (!best) return unknown_answer();
            a.status = Answer::Status::Answered;
            a.payload = v.d->render(best->prop.args[0]);
            a.support.push_back(best->id);
            a.explanation = v.why_chain(best->id);
            return a;
        }
        case QueryKind::LocationOf: {
            if (form.args.empty()) throw std::runtime_error("location-of needs a thing");
            std::string thing = v.d->chase(form.args[0]);
            const Hypothesis* best = nullptr;
            for (const auto* h : v.true_with_predicate("at")) {
                if (h->prop.args.size() != 2 || !v.arg_is(h->prop.args[0], thing)) continue;
                if (!best || h->sentence >= best->sentence) best = h;
            }
            if (!best) return unknown_answer();
            a.status = Answer::Status::Answered;
            a.payload = v.d->render(best->prop.args[1]);
            a.support.push_back(best->id);
            a.explanation = v.why_chain(best->id);
            return a;
        }
        case QueryKind::Wanted: {
            if (form.args.size() < 2) throw std::runtime_error("wanted needs person and state");
            std::string person = v.d->chase(form.args[0]);
            const std::string& state = form.args[1];
            for (const auto* h : v.true_with_predicate("goal-avoid")) {
                if (h->prop.args.size() == 2 && v.arg_is(h->prop.args[0], person) &&
                    h->prop.args[1] == state) {
                    a.status = Answer::Status::Answered;
                    a.payload = "no";
                    a.support.push_back(h->id);
                    a.explanation = v.why_chain(h->id);
                    return a;
                }
            }
            for (const auto* h : v.true_with_predicate("goal")) {
                if (h->prop.args.size() == 2 && v.arg_is(h->prop.args[0], person) &&
                    h->prop.args[1] == state) {
                    a.status = Answer::Status::Answered;
                    a.payload = "yes";
                    a.support.push_back(h->id);
                    a.explanation = v.why_chain(h->id);
                    return a;
                }
            }
            return unknown_answer();
        }
        case QueryKind::GoalOf: {
            if (form.args.empty()) throw std::runtime_error("goal-of needs a person");
            std::string person = v.d->chase(form.args[0]);
            std::vector<std::string> parts;
            for (const char* pred : {"goal", "goal-avoid"}) {
                for (const auto* h : v.true_with_predicate(pred)) {
                    if (h->prop.args.empty() || !v.arg_is(h->prop.args[0], person)) continue;
                    std::string g = std::string(pred) == "goal-avoid" ? "avoid being " : "";
                    for (size_t i = 1; i < h->prop.args.size(); ++i)
                        g += (i > 1 ? " " : "") + v.d->render(h->prop.args[i]);
                    parts.push_back(g);
                    a.support.push_back(h->id);
                }
            }
            if (parts.empty()) return unknown_answer();
            a.status = Answer::Status::Answered;
            for (size_t i = 0; i < parts.size(); ++i) a.payload += (i ? "; " : "") + parts[i];
            return a;
        }
        case QueryKind::Feel: {
            if (form.args.empty()) throw std::runtime_error("feel needs a person");
            std::string person = v.d->chase(form.args[0]);
            std::vector<std::string> parts;
            for (const char* pred : {"fearful-of", "angry-at", "dissatisfied-with"}) {
                for (const auto* h : v.true_with_predicate(pred)) {
                    if (h->prop.args.empty() || !v.arg_is(h->prop.args[0], person)) continue;
                    std::string what = pred == std::string("fearful-of")          ? "fearful of "
                                       : pred == std::string("angry-at")          ? "angry at "
                                                                                  : "dissatisfied with ";
                    if (h->prop.args.size() > 1) what += v.d->render(h->prop.args[1]);
                    parts.push_back(what);
                    a.support.push_back(h->id);
                    for (int c : v.why_chain(h->id)) a.explanation.push_back(c);
                }
            }
            if (parts.empty()) return unknown_answer();
            a.status = Answer::Status::Answered;
            for (size_t i = 0; i < parts.size(); ++i) a.payload += (i ? "; " : "") + parts[i];
            return a;
        }
        case QueryKind::Liked: {
            if (form.args.size() < 2) throw std::runtime_error("liked needs two people");
            std::string p = v.d->chase(form.args[0]), q = v.d->chase(form.args[1]);
            for (const char* pred : {"fearful-of", "angry-at"}) {
                for (const auto* h : v.true_with_predicate(pred)) {
                    if (h->prop.args.size() == 2 && v.arg_is(h->prop.args[0], p) &&
                        v.arg_is(h->prop.args[1], q)) {
                        a.status = Answer::Status::Answered;
                        a.payload = "no";
                        a.support.push_back(h->id);
                        return a;
                    }
                }
            }
            for (const auto* h : v.true_with_predicate("likes")) {
                if (h->prop.args.size() == 2 && v.arg_is(h->prop.args[0], p) &&
                    v.arg_is(h->prop.args[1], q)) {
                    a.status = Answer::Status::Answered;
                    a.payload = "yes";
                    a.support.push_back(h->id);
                    return a;
                }
            }
            return unknown_answer();
        }
        case QueryKind::Transferred: {
            if (form.args.empty()) throw std::runtime_error("transferred needs a thing");
            std::string thing = v.d->chase(form.args[0]);
            for (const auto* h : v.true_with_predicate("transfer")) {
                if (h->prop.args.size() == 3 && v.arg_is(h->prop.args[2], thing)) {
                    a.status = Answer::Status::Answered;
                    a.payload = v.d->render(h->prop.args[0]) + " transferred " +
                                v.d->render(h->prop.args[2]) + " to " + v.d->render(h->prop.args[1]);
                    a.support.push_back(h->id);
                    return a;
                }
            }
            return unknown_answer();
        }
        case QueryKind::ConcordConflict: {
            if (form.args.size() < 2) throw std::runtime_error("concord-conflict needs two people");
            std::string p = v.d->chase(form.args[0]), q = v.d->chase(form.args[1]);
            auto pair_matches = [&](const Hypothesis* h) {
                return h->prop.args.size() == 2 &&
                       ((v.arg_is(h->prop.args[0], p) && v.arg_is(h->prop.args[1], q)) ||
                        (v.arg_is(h->prop.args[0], q) && v.arg_is(h->prop.args[1], p)));
            };
            for (const auto* h : v.true_with_predicate("in-conflict")) {
                if (pair_matches(h)) {
                    a.status = Answer::Status::Answered;
                    a.payload = "conflict";
                    a.support.push_back(h->id);
                    a.explanation = v.why_chain(h->id);
                    return a;
                }
            }
            for (const auto* h : v.true_with_predicate("in-concord")) {
                if (pair_matches(h)) {
                    a.status = Answer::Status::Answered;
                    a.payload = "concord";
                    a.support.push_back(h->id);
                    return a;
                }
            }
            return unknown_answer();
        }
        case QueryKind::Why: {
            if (form.args.empty()) throw std::runtime_error("why needs a proposition");
            const std::string& pred = form.args[0];
            const Hypothesis* target = nullptr;
            for (const auto* h : v.true_with_predicate(pred)) {
                bool ok = true;
                for (size_t i = 1; i < form.args.size(); ++i)
                    if (i - 1 >= h->prop.args.size() || !v.arg_is(form.args[i], h->prop.args[i - 1]))
                        ok = false;
                if (ok) {
                    target = h;
                    break;
                }
            }
            if (!target) return unknown_answer();
            a.explanation = v.why_chain(target->id);
            if (a.explanation.empty()) return unknown_answer();
            a.status = Answer::Status::Answered;
            for (size_t i = 0; i < a.explanation.size(); ++i)
                a.payload += (i ? "; because " : "because ") + v.render_prop(a.explanation[i]);
            a.support.push_back(target->id);
            return a;
        }
        case QueryKind::CounterfactualRemove:
            return unknown_answer();  // handled by the caller
    }
    return unknown_answer();
}

// Clone of the live stores that rules can keep writing into.
struct Ghost {
    HypothesisStore hyps;
    ConstraintStore constraints;
    EntityRegistry registry;
    Interpretation interp;
    std::vector<Formula> extra_hard;

    explicit Ghost(const Discourse& d)
        : hyps(d.hyps()), constraints(d.constraints()), registry(d.registry()) {}

    bool settle(const SolveConfig& solver) {
        ConstraintSystem system = build_system(hyps, constraints);
        for (const auto& f : extra_hard) system.hard.push_back(f);
        if (static_cast<int>(system.variables.size()) <= solver.exact_threshold) {
            auto optima = solve_exact(system, solver);
            if (optima.empty()) return false;
            interp = optima.front();
        } else {
            auto result = solve_stochastic(system, solver);
            if (result.feasibility_unknown()) return false;
            interp = *result.best;
        }
        return true;
    }

    // One forward pass of a realm's rules (or every realm's) over all sentences.
    void forward(const Discourse& d, const std::string& realm) {
        for (const auto& sa : d.analyses()) {
            ProposeContext ctx;
            ctx.kb = &d.kb();
            ctx.lex = &d.lexicon();
            ctx.sa = &sa;
            ctx.registry = &registry;
            ctx.hyps = &hyps;
            ctx.constraints = &constraints;
            ctx.truth = &interp.assignment;
            ctx.chase = [&d](const std::string& id) { return d.chase(id); };
            ctx.sentence = sa.sentence;
            if (realm.empty())
                d.engine().propose_all(ctx);
            else
                d.engine().propose_realm(realm, ctx);
        }
    }

    View view(const Discourse& d) const {
        return View{&d, &hyps, &constraints.links(), &interp.assignment};
    }
};

}  // namespace

Answer answer_question(const Discourse& d, const QueryForm& form) {
    if (form.kind == QueryKind::CounterfactualRemove) {
        if (form.args.size() == 1 && !form.args[0].empty() &&
            form.args[0].find_first_not_of("0123456789") == std::string::npos)
            return counterfactual_remove(d, std::stoi(form.args[0]));
        if (form.args.size() < 2) throw std::runtime_error("counterfactual-remove needs person and verb");
        std::string person = d.chase(form.args[0]);
        const std::string& lemma = form.args[1];
        for (const auto* h : d.hyps().live()) {
            if (!d.hyp_true(h->id)) continue;
            if (h->prop.predicate.find(lemma) == std::string::npos) continue;
            bool about = false;
            for (const auto& arg : h->prop.args)
                if (d.chase(arg) == person) about = true;
            if (about) return counterfactual_remove(d, h->id);
        }
        throw std::runtime_error("no true hypothesis about " + d.render(person) + " matching '" +
                                 lemma + "'");
    }

    View live{&d, &d.hyps(), &d.constraints().links(), &d.interpretation().assignment};
    Answer a = answer_direct(live, form);
    if (a.status != Answer::Status::Unknown) return a;

    // one elaboration pass on a clone before giving up; the discourse itself
    // is never modified by a question
    Ghost ghost(d);
    ghost.interp = d.interpretation();
    ghost.forward(d, "");
    if (ghost.hyps.size() == d.hyps().size()) return a;
    if (!ghost.settle(d.config().solver)) return a;
    Answer elaborated = answer_direct(ghost.view(d), form);
    return elaborated.status == Answer::Status::Answered ? elaborated : a;
}

Answer answer_baseline(const Discourse& d, const std::string& realm, const QueryForm& form) {
    static const std::map<std::string, std::vector<QueryKind>> supported = {
        {"need-goal", {QueryKind::Wanted, QueryKind::GoalOf}},
        {"emotion", {QueryKind::Feel, QueryKind::Liked}},
        {"physical", {QueryKind::LocationOf}},
        {"possession", {QueryKind::HolderOf, QueryKind::Transferred}},
        {"competition", {QueryKind::ConcordConflict}},
    };
    auto it = supported.find(realm);
    if (it == supported.end() ||
        std::find(it->second.begin(), it->second.end(), form.kind) == it->second.end()) {
        Answer a;
        a.status = Answer::Status::Unsupported;
        a.payload = "realm " + realm + " does not answer " + query_kind_name(form.kind);
        return a;
    }
    return answer_question(d, form);
}

Answer counterfactual_remove(const Discourse& d, int hypothesis_id) {
    const Hypothesis* h = d.hyps().find(hypothesis_id);
    if (!h)
        throw std::runtime_error("counterfactual: hypothesis " + std::to_string(hypothesis_id) +
                                 " not found");
    if (!d.hyp_true(hypothesis_id))
        throw std::runtime_error("counterfactual: hypothesis " + std::to_string(hypothesis_id) +
                                 " is not true in the working interpretation");

    Ghost ghost(d);
    ghost.extra_hard.push_back(Formula::negate(Formula::variable(hypothesis_id)));
    Answer a;
    if (!ghost.settle(d.config().solver)) {
        a.status = Answer::Status::Unknown;
        a.payload = "no consistent interpretation without it";
        return a;
    }
    // the owning realm's rules elaborate the modified world, then it settles
    ghost.forward(d, h->realm);
    ghost.settle(d.config().solver);

    a.status = Answer::Status::Answered;
    for (const auto& gh : ghost.hyps.all()) {
        auto it = ghost.interp.assignment.find(gh.id);
        bool now_true = it != ghost.interp.assignment.end() && it->second;
        if (!now_true) continue;
        const Hypothesis* orig = d.hyps().find(gh.id);
        bool was_true = orig && d.hyp_true(gh.id);
        if (was_true) continue;
        std::string rendered = gh.prop.predicate;
        for (const auto& arg : gh.prop.args) rendered += " " + d.render(arg);
        a.consequences.push_back(rendered);
        a.support.push_back(gh.id);
    }
    std::sort(a.consequences.begin(), a.consequences.end());
    a.payload = a.consequences.empty() ? "nothing follows from removing it"
                                       : "then: " + a.consequences.front();
    return a;
}

std::string Answer::text(const Discourse& d) const {
    std::ostringstream out;
    out << "answer: " << payload << "\n";
    if (!explanation.empty()) {
        out << "because:";
        for (int id : explanation) {
            const Hypothesis* h = d.hyps().find(id);
            if (!h) continue;
            out << " " << h->prop.predicate;
            for (const auto& arg : h->prop.args) out << " " << d.render(arg);
            out << ";";
        }
        out << "\n";
    }
    for (const auto& c : consequences) out << "consequence: " << c << "\n";
    if (!support.empty()) {
        out << "support:";
        for (int id : support) out << " " << id;
        out << "\n";
    }
    return out.str();
}

}  // namespace deepread
