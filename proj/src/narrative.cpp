#include "deepread/narrative.hpp"

#include <algorithm>
#include <sstream>

namespace deepread {

Discourse::Discourse(const KnowledgeBase& kb, const Lexicon& lex, const TextPipe& pipe,
                     const AgentEngine& engine, NarrativeConfig config)
    : kb_(&kb), lex_(&lex), pipe_(&pipe), engine_(&engine), config_(std::move(config)) {
    history_.push_back(state_);
}

std::string Discourse::chase(const std::string& id) const {
    std::string current = id;
    for (int hops = 0; hops < 16; ++hops) {
        auto it = state_.resolution.find(current);
        if (it == state_.resolution.end() || it->second == current) return current;
        current = it->second;
    }
    return current;
}

std::string Discourse::render(const std::string& arg) const {
    std::string id = chase(arg);
    if (const DiscourseEntity* e = state_.registry.find(id)) {
        if (!e->name.empty()) return e->name;
        if (!e->head_lemma.empty()) return "the " + e->head_lemma + (e->plural ? "s" : "");
        return e->id;
    }
    if (kb_->has_concept(id)) return kb_->concept_of(id).display();
    return id;
}

bool Discourse::hyp_true(int id) const {
    auto it = state_.interp.assignment.find(id);
    return it != state_.interp.assignment.end() && it->second;
}

bool Discourse::hyp_true_in_any_optimum(int id) const {
    for (const auto& ts : state_.optima_true)
        if (std::binary_search(ts.begin(), ts.end(), id)) return true;
    return false;
}

std::vector<const Hypothesis*> Discourse::true_hyps(const std::string& realm) const {
    std::vector<const Hypothesis*> out;
    for (const auto* h : state_.hyps.live()) {
        if (!realm.empty() && h->realm != realm) continue;
        if (hyp_true(h->id)) out.push_back(h);
    }
    return out;
}

const Frame* Discourse::find_frame(int id) const {
    for (const auto& sa : analyses_)
        for (const auto& f : sa.frames)
            if (f.id == id) return &f;
    return nullptr;
}

bool Discourse::frame_gate_true(const Frame& f, const Assignment& truth) const {
    auto check = [&](const std::string& realm, const Proposition& prop) {
        const Hypothesis* h = state_.hyps.find_prop(realm, prop);
        if (!h) return true;  // ungated dimension
        if (h->retired) return false;
        auto it = truth.find(h->id);
        return it != truth.end() && it->second;
    };
    if (!check("lexical", Proposition{"sense-of", {f.verb_lemma, f.verb_sense}})) return false;
    if (!check("parse", Proposition{"reading-of", {"frame" + std::to_string(f.id)}})) return false;
    return true;
}

SentenceAnalysis Discourse::analyze(const std::string& text, int sentence) {
    SentenceAnalysis sa;
    sa.sentence = sentence;
    sa.text = text;
    sa.tokens = pipe_->tokenize(text);
    sa.entities = pipe_->recognize_entities(text);
    pipe_->tag_nbest(sa.tokens, sa.entities, config_.tag_hypotheses);
    sa.units = build_units(*pipe_, sa.tokens, sa.entities);
    sa.chunks = chunk_parse(sa.units, config_.max_parse_alternatives);
    build_frames(*kb_, *lex_, sa, state_.registry, state_.counters);
    return sa;
}

void Discourse::merge_events(const SentenceAnalysis& sa) {
    for (const auto& f : sa.frames) {
        if (f.frame_type == "identity-state" || f.frame_type == "attribute-state") continue;
        std::vector<std::pair<const Frame*, int>> partners;  // (old frame, overlap)
        for (const auto& old_sa : analyses_) {
            if (old_sa.sentence >= sa.sentence) continue;
            for (const auto& g : old_sa.frames) {
                if (!frame_gate_true(g, state_.interp.assignment)) continue;
                bool type_ok =
                    f.frame_type == g.frame_type ||
                    (kb_->has_concept(f.frame_type) && kb_->has_concept(g.frame_type) &&
                     (kb_->specializes(f.frame_type, g.frame_type) ||
                      kb_->specializes(g.frame_type, f.frame_type)));
                if (!type_ok) continue;
                bool clash = false;
                int overlap = 0;
                for (const auto& [role, filler] : f.roles) {
                    auto it = g.roles.find(role);
                    if (it == g.roles.end()) continue;
                    if (filler.kind != it->second.kind) {
                        clash = true;
                        break;
                    }
                    if (filler.kind == RoleFiller::Kind::Entity) {
                        std::string a = chase(filler.entity);
                        std::string b = chase(it->second.entity);
                        if (a == b) {
                            overlap++;
                        } else {
                            const DiscourseEntity* ea = state_.registry.find(a);
                            const DiscourseEntity* eb = state_.registry.find(b);
                            bool unresolved = (ea && ea->anaphor) || (eb && eb->anaphor);
                            if (!unresolved) {
                                clash = true;
                                break;
                            }
                        }
                    } else if (!(filler == it->second)) {
                        clash = true;
                        break;
                    }
                }
                if (clash || overlap < 1) continue;
                partners.emplace_back(&g, overlap);
            }
        }
        if (partners.empty()) continue;

        std::string fref = "frame" + std::to_string(f.id);
        std::string group = "merge:" + fref;
        int keep = state_.hyps.propose("physical", "", HypKind::Merge,
                                       Proposition{"distinct-event", {fref}}, "merge-scan",
                                       sa.sentence);
        state_.constraints.add_to_group(group, keep);
        for (const auto& [g, overlap] : partners) {
            std::string gref = "frame" + std::to_string(g->id);
            int id = state_.hyps.propose("physical", "", HypKind::Merge,
                                         Proposition{"same-event", {fref, gref}}, "merge-scan",
                                         sa.sentence);
            state_.constraints.add_to_group(group, id);
            state_.constraints.add_soft(1.0 + overlap, Formula::variable(id), "merge-scan",
                                        "merge:" + fref + ":" + gref);
            bool seen = false;
            for (const auto& m : merges_)
                if (m.hyp == id) seen = true;
            if (!seen) merges_.push_back({id, f.id, g->id, 1.0 + overlap});
        }
    }
}

bool Discourse::settle() {
    ConstraintSystem system = build_system(state_.hyps, state_.constraints);
    state_.optima_true.clear();
    if (static_cast<int>(system.variables.size()) <= config_.solver.exact_threshold) {
        std::vector<Interpretation> optima = solve_exact(system, config_.solver);
        if (optima.empty()) {
            state_.interp.feasible = false;
            return false;
        }
        state_.interp = optima.front();  // lexicographically least true set
        for (const auto& o : optima) state_.optima_true.push_back(o.true_ids());
    } else {
        StochasticResult result = solve_stochastic(system, config_.solver);
        if (result.feasibility_unknown()) {
            state_.interp.feasible = false;
            return false;
        }
        state_.interp = *result.best;
        state_.optima_true.push_back(state_.interp.true_ids());
    }
    return true;
}

void Discourse::apply_resolutions() {
    state_.resolution.clear();
    for (const auto& [from, to] : state_.aliases)
        if (from != to) state_.resolution[from] = to;
    for (const auto* h : state_.hyps.live()) {
        if (h->realm != "reference" || h->prop.predicate != "refers-to") continue;
        if (!hyp_true(h->id)) continue;
        if (h->prop.args[0] != h->prop.args[1]) state_.resolution[h->prop.args[0]] = h->prop.args[1];
    }
}

void Discourse::prune(int sentence) {
    if (config_.prune_horizon <= 0) return;
    std::vector<int> dropped;
    for (const auto& h : state_.hyps.all()) {
        if (h.retired) continue;
        Hypothesis* hp = state_.hyps.find(h.id);
        if (hyp_true_in_any_optimum(h.id)) {
            hp->false_streak = 0;
            continue;
        }
        hp->false_streak++;
        if (hp->false_streak >= config_.prune_horizon) dropped.push_back(h.id);
    }
    if (dropped.empty()) return;
    for (int id : dropped) state_.hyps.retire(id);
    state_.prune_log.push_back({sentence, dropped,
                                "false in all optima for " + std::to_string(config_.prune_horizon) +
                                    " consecutive sentences"});
    // retirement changes the system: re-settle so the working interpretation
    // stays consistent with the live store
    settle();
    apply_resolutions();
}

void Discourse::ingest_internal(const std::string& text, int sentence, bool allow_reread,
                                bool prune_enabled) {
    SentenceAnalysis sa = analyze(text, sentence);
    if (static_cast<int>(analyses_.size()) >= sentence)
        analyses_[sentence - 1] = sa;
    else
        analyses_.push_back(sa);
    const SentenceAnalysis& ref = analyses_[sentence - 1];
    if (ref.chunks.truncated)
        state_.prune_log.push_back({sentence, {}, "parse alternatives capped"});

    for (const auto& [from, to] : ref.aliases) {
        bool seen = false;
        for (const auto& a : state_.aliases)
            if (a.first == from && a.second == to) seen = true;
        if (!seen) state_.aliases.emplace_back(from, to);
    }

    Agenda agenda(config_.budget);
    DiscourseSignals signals;
    signals.previous_score = state_.last_score;

    ProposeContext ctx;
    ctx.kb = kb_;
    ctx.lex = lex_;
    ctx.sa = &ref;
    ctx.registry = &state_.registry;
    ctx.hyps = &state_.hyps;
    ctx.constraints = &state_.constraints;
    ctx.truth = &state_.interp.assignment;
    ctx.chase = [this](const std::string& id) { return chase(id); };
    ctx.sentence = sentence;

    std::string s = ":s" + std::to_string(sentence);
    auto executor = [&](const Task& task) -> TaskResult {
        TaskResult result;
        if (task.kind == "lexical-choices") {
            engine_->emit_lexical_choices(ctx);
            apply_resolutions();
        } else if (task.kind.starts_with("propose:")) {
            engine_->propose_realm(task.kind.substr(8), ctx);
        } else if (task.kind == "merge-scan") {
            int before = state_.hyps.size();
            merge_events(ref);
            if (state_.hyps.size() != before) {
                Task resettle;
                resettle.kind = "settle";
                resettle.signature = "settle" + s + ":merge";
                resettle.priority = 64;
                resettle.relevance = "read";
                result.spawned.push_back(resettle);
            }
        } else if (task.kind.starts_with("settle")) {
            if (!settle()) {
                signals.infeasible_settlement = true;
                return result;
            }
            signals.current_score = state_.interp.score;
            apply_resolutions();
            int pass = task.depth + 1;
            if (pass <= config_.max_forward_passes) {
                Task elaborate;
                elaborate.kind = "elaborate";
                elaborate.signature = "elaborate" + s + ":p" + std::to_string(pass);
                elaborate.priority = 60 - 2 * pass;
                elaborate.depth = pass;
                elaborate.relevance = "read";
                result.spawned.push_back(elaborate);
            }
        } else if (task.kind == "elaborate") {
            int before = state_.hyps.size();
            engine_->propose_all(ctx);
            if (state_.hyps.size() != before) {
                Task resettle;
                resettle.kind = "settle";
                resettle.signature = "settle" + s + ":p" + std::to_string(task.depth);
                resettle.priority = 59 - 2 * task.depth;
                resettle.depth = task.depth;
                resettle.relevance = "read";
                result.spawned.push_back(resettle);
            }
        } else if (task.kind == "prune") {
            if (prune_enabled) prune(sentence);
        }
        return result;
    };

    auto stage = [&](const std::string& kind, int priority) {
        Task t;
        t.kind = kind;
        t.signature = kind + s;
        t.priority = priority;
        t.relevance = "read";
        agenda.submit(std::move(t));
    };
    stage("lexical-choices", 95);
    {
        std::vector<std::string> realm_ids;
        for (const auto& r : engine_->realms()) realm_ids.push_back(r.id);
        std::sort(realm_ids.begin(), realm_ids.end());
        for (const auto& rid : realm_ids) stage("propose:" + rid, 90);
    }
    stage("settle", 70);
    stage("merge-scan", 65);  // after settlement, so anaphors are resolved
    stage("prune", 10);

    agenda.run(executor, signals);
    last_log_ = agenda.log();
    state_.last_score = state_.interp.feasible ? state_.interp.score : state_.last_score;

    if (!state_.interp.feasible) {
        if (allow_reread && agenda.reread_requested()) {
            reread(std::max(1, sentence - 2));
            if (!state_.interp.feasible) state_.confused = true;
        } else {
            state_.confused = true;
        }
    } else if (state_.confused) {
        state_.confused = false;
    }
}

void Discourse::ingest_sentence(const std::string& text) {
    texts_.push_back(text);
    int k = sentences();
    ingest_internal(text, k, true, config_.prune_horizon > 0);
    if (static_cast<int>(history_.size()) == k) history_.push_back(state_);
}

void Discourse::reread(int from_sentence) {
    if (from_sentence < 1 || from_sentence > sentences())
        throw std::out_of_range("reread: sentence index " + std::to_string(from_sentence) +
                                " out of range (1.." + std::to_string(sentences()) + ")");
    state_ = history_.at(from_sentence - 1);
    history_.resize(from_sentence);
    analyses_.resize(from_sentence - 1);
    for (int k = from_sentence; k <= static_cast<int>(texts_.size()); ++k) {
        ingest_internal(texts_[k - 1], k, false, false);
        history_.push_back(state_);
    }
}

std::vector<CategoryReport> Discourse::category_report() const {
    std::map<std::string, std::vector<ConceptId>> by_entity;
    for (const auto* h : state_.hyps.live()) {
        if (h->prop.predicate != "category-of" || h->prop.args.size() != 2) continue;
        if (!hyp_true_in_any_optimum(h->id)) continue;
        by_entity[chase(h->prop.args[0])].push_back(h->prop.args[1]);
    }
    std::vector<CategoryReport> out;
    for (auto& [entity, cats] : by_entity) {
        std::sort(cats.begin(), cats.end());
        CategoryReport r;
        r.entity = entity;
        r.categories = cats;
        r.indefinite = cats.size() > 2;
        out.push_back(std::move(r));
    }
    return out;
}

std::string Discourse::dump_snapshot() const {
    std::ostringstream out;
    out << "deepread-snapshot 1\n";
    out << "sentences " << sentences() << "\n";
    out << "score " << state_.interp.score << "\n";
    out << "feasible " << (state_.interp.feasible ? 1 : 0) << "\n";
    for (const auto& h : state_.hyps.all()) {
        out << "hyp " << h.id << " " << h.realm << " " << (h.instance.empty() ? "-" : h.instance)
            << " " << hyp_kind_name(h.kind) << " " << h.retired << " " << h.false_streak << " "
            << (h.rule.empty() ? "-" : h.rule) << " " << h.sentence << " " << h.prop.text() << "\n";
    }
    for (const auto& [name, members] : state_.constraints.groups()) {
        out << "group " << name;
        for (int id : members) out << " " << id;
        out << "\n";
    }
    for (const auto& c : state_.constraints.constraints()) {
        out << "constraint " << c.id << " " << (c.hard ? "hard" : "soft") << " " << c.weight << " "
            << (c.rule.empty() ? "-" : c.rule) << " " << c.formula.to_string() << "\n";
    }
    for (const auto& l : state_.constraints.links())
        out << "link " << l.cause << " " << l.effect << " " << l.rule << "\n";
    for (const auto& [from, to] : state_.resolution) out << "resolve " << from << " " << to << "\n";
    for (const auto* e : state_.registry.in_order()) {
        out << "entity " << e->id << " " << (e->head_lemma.empty() ? "-" : e->head_lemma) << " "
            << e->plural << " " << e->person << " " << e->anaphor << " " << e->sentence;
        if (!e->name.empty()) out << " " << e->name;
        out << "\n";
    }
    out << "true";
    for (int id : state_.interp.true_ids()) out << " " << id;
    out << "\n";
    return out.str();
}

std::string Discourse::state_digest() const {
    std::ostringstream out;
    out << dump_snapshot();
    for (const auto& e : state_.prune_log) {
        out << "prune " << e.sentence << " " << e.reason;
        for (int id : e.dropped) out << " " << id;
        out << "\n";
    }
    for (const auto& ts : state_.optima_true) {
        out << "optimum";
        for (int id : ts) out << " " << id;
        out << "\n";
    }
    return out.str();
}

}  // namespace deepread
