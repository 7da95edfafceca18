// config.hpp : run configuration, runtime assembly, and the command-level
// entry points shared by the CLI and the test suites
#pragma once

#include <memory>
#include <string>
#include <vector>

#include "deepread/narrative.hpp"

namespace deepread {

struct RunConfig {
    std::vector<std::string> kb_paths;
    std::vector<std::string> lexicon_paths;
    std::vector<std::string> rule_paths;
    std::string entities_path;
    std::string tag_rules_path;
    NarrativeConfig narrative;
    int trace = 0;
    bool timestamps = true;

    std::string base_dir;  // directory the config file lives in
};

// key = value lines, '#' comments; `kb`, `lexicon`, `rules` may repeat or
// hold comma-separated lists. Relative paths resolve against the config dir.
RunConfig load_config(const std::string& path);

// A fully wired engine; address-stable, so heap-allocated.
struct Runtime {
    KnowledgeBase kb;
    Lexicon lex;
    std::unique_ptr<TextPipe> pipe;
    AgentEngine engine;
    std::unique_ptr<Discourse> discourse;

    Runtime() = default;
    Runtime(const Runtime&) = delete;
    Runtime& operator=(const Runtime&) = delete;
};

std::unique_ptr<Runtime> build_runtime(const RunConfig& config);

// Per-sentence interpretation summary plus batch question answers; the
// report is byte-stable for a fixed config and corpus.
struct UnderstandResult {
    int exit_code = 0;  // 0 ok, 2 unresolved confusion
    std::string report;
};

UnderstandResult cmd_understand(const RunConfig& config, const std::string& story_path,
                                const std::vector<std::string>& question_paths = {});

// Pipeline dump: entities, tags, trees, frames, execution log, snapshot.
std::string cmd_trace(const RunConfig& config, const std::string& story_path);

struct SolveResult {
    int exit_code = 0;
    std::string output;
};

SolveResult cmd_solve(const std::string& system_path, const SolveConfig& solver, bool force_exact);

// Interactive question loop over an ingested story (used by the repl command).
int cmd_repl(const RunConfig& config, const std::string& story_path, std::istream& in,
             std::ostream& out);

// One settled-state summary block for a discourse sentence.
std::string sentence_summary(const Discourse& d, int sentence);

}  // namespace deepread
