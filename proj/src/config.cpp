#include "deepread/config.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "deepread/qa.hpp"
#include "deepread/sexpr.hpp"

namespace deepread {

namespace {

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream ss(s);
    while (std::getline(ss, item, ',')) {
        size_t a = item.find_first_not_of(" \t");
        size_t b = item.find_last_not_of(" \t");
        if (a != std::string::npos) out.push_back(item.substr(a, b - a + 1));
    }
    return out;
}

std::string resolve(const std::string& base, const std::string& path) {
    std::filesystem::path p(path);
    if (p.is_absolute() || base.empty()) return path;
    return (std::filesystem::path(base) / p).string();
}

}  // namespace

RunConfig load_config(const std::string& path) {
    RunConfig config;
    config.base_dir = std::filesystem::path(path).parent_path().string();
    std::istringstream in(read_text_file(path));
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        lineno++;
        size_t comment = line.find('#');
        if (comment != std::string::npos) line = line.substr(0, comment);
        size_t eq = line.find('=');
        if (eq == std::string::npos) {
            if (line.find_first_not_of(" \t\r") != std::string::npos)
                throw ParseError(path, lineno, "expected key = value");
            continue;
        }
        std::string key = line.substr(0, eq);
        std::string value = line.substr(eq + 1);
        auto trim = [](std::string& s) {
            size_t a = s.find_first_not_of(" \t\r");
            size_t b = s.find_last_not_of(" \t\r");
            s = a == std::string::npos ? "" : s.substr(a, b - a + 1);
        };
        trim(key);
        trim(value);
        if (value.empty()) throw ParseError(path, lineno, "empty value for " + key);
        try {
            if (key == "kb")
                for (const auto& p : split_list(value)) config.kb_paths.push_back(resolve(config.base_dir, p));
            else if (key == "lexicon")
                for (const auto& p : split_list(value))
                    config.lexicon_paths.push_back(resolve(config.base_dir, p));
            else if (key == "rules")
                for (const auto& p : split_list(value))
                    config.rule_paths.push_back(resolve(config.base_dir, p));
            else if (key == "entities")
                config.entities_path = resolve(config.base_dir, value);
            else if (key == "tagrules")
                config.tag_rules_path = resolve(config.base_dir, value);
            else if (key == "seed")
                config.narrative.solver.seed = std::stoull(value);
            else if (key == "max-restarts")
                config.narrative.solver.max_restarts = std::stoi(value);
            else if (key == "max-flips-per-var")
                config.narrative.solver.max_flips_per_var = std::stoi(value);
            else if (key == "noise")
                config.narrative.solver.noise = std::stod(value);
            else if (key == "exact-threshold")
                config.narrative.solver.exact_threshold = std::stoi(value);
            else if (key == "max-tasks")
                config.narrative.budget.max_tasks = std::stoi(value);
            else if (key == "max-depth")
                config.narrative.budget.max_depth = std::stoi(value);
            else if (key == "max-tasks-per-question")
                config.narrative.budget.max_tasks_per_question = std::stoi(value);
            else if (key == "relevance")
                config.narrative.budget.relevance_tags = split_list(value);
            else if (key == "prune-horizon")
                config.narrative.prune_horizon = std::stoi(value);
            else if (key == "max-parse-alternatives")
                config.narrative.max_parse_alternatives = std::stoi(value);
            else if (key == "tag-hypotheses")
                config.narrative.tag_hypotheses = std::stoi(value);
            else if (key == "trace")
                config.trace = std::stoi(value);
            else
                throw std::runtime_error("unknown config key '" + key + "'");
        } catch (const ParseError&) {
            throw;
        } catch (const std::exception& e) {
            throw ParseError(path, lineno, e.what());
        }
    }
    if (config.kb_paths.empty()) throw std::runtime_error(path + ": config needs at least one kb");
    if (config.lexicon_paths.empty())
        throw std::runtime_error(path + ": config needs at least one lexicon");
    if (config.entities_path.empty() || config.tag_rules_path.empty())
        throw std::runtime_error(path + ": config needs entities and tagrules paths");
    return config;
}

std::unique_ptr<Runtime> build_runtime(const RunConfig& config) {
    auto rt = std::make_unique<Runtime>();
    rt->kb = load_kb(config.kb_paths);
    rt->lex = load_lexicon(config.lexicon_paths, rt->kb);
    rt->pipe = std::make_unique<TextPipe>(
        rt->lex, TextPipeData::load(config.entities_path, config.tag_rules_path));
    for (auto& realm : builtin_realms()) rt->engine.register_realm(realm);
    for (const auto& p : config.rule_paths) rt->engine.load_rules(p);
    rt->discourse =
        std::make_unique<Discourse>(rt->kb, rt->lex, *rt->pipe, rt->engine, config.narrative);
    return rt;
}

std::string sentence_summary(const Discourse& d, int sentence) {
    std::ostringstream out;
    const auto& analyses = d.analyses();
    if (sentence < 1 || sentence > static_cast<int>(analyses.size())) return "";
    out << "sentence " << sentence << ": " << analyses[sentence - 1].text << "\n";

    // settled word senses
    std::vector<std::string> senses;
    for (const auto* h : d.true_hyps("lexical"))
        if (h->prop.predicate == "sense-of" && h->prop.args.size() == 2)
            senses.push_back(h->prop.args[0] + "=" + h->prop.args[1]);
    std::sort(senses.begin(), senses.end());
    if (!senses.empty()) {
        out << "  senses:";
        for (const auto& s : senses) out << " " << s;
        out << "\n";
    }

    for (const auto& report : d.category_report()) {
        out << "  categories(" << report.entity << "):";
        for (const auto& c : report.categories) out << " " << c;
        if (report.indefinite) out << " [indefinite]";
        out << "\n";
    }

    // true hypotheses grouped by realm, engine pseudo-realms last
    std::vector<std::string> realm_ids;
    for (const auto& r : d.engine().realms()) realm_ids.push_back(r.id);
    std::sort(realm_ids.begin(), realm_ids.end());
    for (const auto& realm : realm_ids) {
        if (realm == "lexical" || realm == "reference" || realm == "parse") continue;
        auto trues = d.true_hyps(realm);
        if (trues.empty()) continue;
        for (const auto* h : trues)
            out << "  [" << realm << "] " << h->prop.text() << "\n";
    }
    out << "  score: " << d.settle_score() << " optima: " << d.optima_true_sets().size();
    if (!d.feasible()) out << " INFEASIBLE";
    out << "\n";
    return out.str();
}

namespace {

std::vector<std::string> read_sentences(const TextPipe& pipe, const std::string& story_path) {
    std::string text = read_text_file(story_path);
    std::vector<std::string> sentences;
    for (const auto& [a, b] : pipe.segment_sentences(text)) sentences.push_back(text.substr(a, b - a));
    return sentences;
}

}  // namespace

UnderstandResult cmd_understand(const RunConfig& config, const std::string& story_path,
                                const std::vector<std::string>& question_paths) {
    UnderstandResult result;
    std::unique_ptr<Runtime> rt = build_runtime(config);
    std::ostringstream out;
    out << "deepread report\n";
    out << "seed: " << config.narrative.solver.seed << "\n";
    if (config.timestamps) {
        std::time_t now = std::time(nullptr);
        char buf[64];
        std::strftime(buf, sizeof(buf), "%Y-%m-%d %H:%M:%S", std::localtime(&now));
        out << "time: " << buf << "\n";
    }

    for (const auto& sentence : read_sentences(*rt->pipe, story_path)) {
        rt->discourse->ingest_sentence(sentence);
        out << sentence_summary(*rt->discourse, rt->discourse->sentences());
    }
    if (rt->discourse->confused()) {
        out << "confusion: unresolved after reread\n";
        result.exit_code = 2;
    }

    for (const auto& qpath : question_paths) {
        std::istringstream qs(read_text_file(qpath));
        std::string line;
        while (std::getline(qs, line)) {
            if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#') continue;
            out << "question: " << line << "\n";
            try {
                QueryForm form = parse_question(*rt->discourse, line);
                Answer answer = answer_question(*rt->discourse, form);
                out << answer.text(*rt->discourse);
            } catch (const std::exception& e) {
                out << "error: " << e.what() << "\n";
            }
        }
    }
    result.report = out.str();
    return result;
}

std::string cmd_trace(const RunConfig& config, const std::string& story_path) {
    std::unique_ptr<Runtime> rt = build_runtime(config);
    std::ostringstream out;
    out << "deepread trace\n";
    for (const auto& sentence : read_sentences(*rt->pipe, story_path)) {
        rt->discourse->ingest_sentence(sentence);
        const SentenceAnalysis& sa = rt->discourse->analyses().back();
        out << "sentence " << sa.sentence << ": " << sa.text << "\n";
        for (const auto& e : sa.entities)
            out << e.begin << ".." << e.end << "\t" << entity_kind_name(e.kind) << "\t" << e.value
                << "\n";
        for (const auto& t : sa.tokens) {
            if (t.punct) continue;
            out << t.begin << ".." << t.end << "\ttag\t" << t.surface << "/"
                << (t.tags.empty() ? "?" : pos_name(t.tags.front().first)) << "\n";
        }
        for (size_t alt = 0; alt < sa.chunks.alternatives.size(); ++alt) {
            out << "parse " << alt << ":";
            for (const auto& frag : sa.chunks.alternatives[alt]) out << " " << frag.bracket(sa.units);
            out << "\n";
        }
        for (const auto& f : sa.frames) out << "frame " << f.id << ": " << f.dump(rt->discourse->registry()) << "\n";
        for (const auto& entry : rt->discourse->last_log()) out << entry.line() << "\n";
        out << sentence_summary(*rt->discourse, rt->discourse->sentences());
    }
    out << rt->discourse->dump_snapshot();
    return out.str();
}

SolveResult cmd_solve(const std::string& system_path, const SolveConfig& solver, bool force_exact) {
    SolveResult result;
    std::ostringstream out;
    ConstraintSystem system;
    try {
        system = load_system(system_path);
    } catch (const std::exception& e) {
        result.exit_code = 1;
        result.output = std::string("error: ") + e.what() + "\n";
        return result;
    }
    bool exact = force_exact || static_cast<int>(system.variables.size()) <= solver.exact_threshold;
    if (exact) {
        std::vector<Interpretation> optima = solve_exact(system, solver);
        if (optima.empty()) {
            out << "infeasible\n";
        } else {
            out << "optimum " << optima.front().score << "\n";
            for (const auto& o : optima) {
                out << "solution:";
                for (int id : o.true_ids()) out << " " << id;
                out << "\n";
            }
        }
    } else {
        StochasticResult r = solve_stochastic(system, solver);
        if (r.feasibility_unknown()) {
            out << "infeasibility-unknown (no feasible assignment found within budget)\n";
        } else {
            out << "optimum " << r.best->score << " (stochastic, best found)\n";
            out << "solution:";
            for (int id : r.best->true_ids()) out << " " << id;
            out << "\n";
        }
    }
    result.output = out.str();
    return result;
}

int cmd_repl(const RunConfig& config, const std::string& story_path, std::istream& in,
             std::ostream& out) {
    std::unique_ptr<Runtime> rt = build_runtime(config);
    for (const auto& sentence : read_sentences(*rt->pipe, story_path))
        rt->discourse->ingest_sentence(sentence);
    if (rt->discourse->confused()) {
        out << "confusion: story had no consistent interpretation\n";
        return 2;
    }
    out << "story ingested: " << rt->discourse->sentences() << " sentences, score "
        << rt->discourse->settle_score() << "\n";
    out << "ask a question, or :hyps <realm>, :trace, :reread <n>, :quit\n";

    std::string line;
    while (out << "? " << std::flush, std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        if (line == ":quit" || line == ":q") break;
        if (line == ":trace") {
            for (const auto& entry : rt->discourse->last_log()) out << entry.line() << "\n";
            out << rt->discourse->dump_snapshot();
            continue;
        }
        if (line.rfind(":hyps", 0) == 0) {
            std::string realm = line.size() > 6 ? line.substr(6) : "";
            for (const auto* h : rt->discourse->true_hyps(realm))
                out << h->id << " [" << h->realm << "] " << h->prop.text() << "\n";
            continue;
        }
        if (line.rfind(":reread", 0) == 0) {
            try {
                int from = std::stoi(line.substr(8));
                rt->discourse->reread(from);
                out << "reread from sentence " << from << ", score "
                    << rt->discourse->settle_score() << "\n";
            } catch (const std::exception& e) {
                out << "error: " << e.what() << "\n";
            }
            continue;
        }
        try {
            QueryForm form = parse_question(*rt->discourse, line);
            Answer answer = answer_question(*rt->discourse, form);
            out << answer.text(*rt->discourse);
        } catch (const UnparseableQuestion& e) {
            out << e.what() << "\n";
        } catch (const std::exception& e) {
            out << "error: " << e.what() << "\n";
        }
    }
    return 0;
}

}  // namespace deepread
