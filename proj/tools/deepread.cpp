// deepread.cpp : command-line entry point — understand, repl, solve, trace
#include <iostream>

#include "CLI11.hpp"
#include "deepread/config.hpp"

int main(int argc, char** argv) {
    CLI::App app{"deepread - in-depth story understanding engine"};
    app.require_subcommand(1);

    std::string config_path;
    long long seed = -1;
    int budget = -1;
    bool no_timestamps = false;
    app.add_option("--config", config_path, "run configuration file")->envname("DEEPREAD_CONFIG");
    app.add_option("--seed", seed, "solver seed override");
    app.add_option("--budget", budget, "max tasks per sentence override");
    app.add_flag("--no-timestamps", no_timestamps, "omit wall-clock lines from reports");

    std::string story_path;
    std::vector<std::string> question_paths;
    CLI::App* understand = app.add_subcommand("understand", "ingest a story and print the settled interpretation");
    understand->add_option("story", story_path, "story text file")->required();
    understand->add_option("--questions", question_paths, "batch question files");

    std::string repl_story;
    CLI::App* repl = app.add_subcommand("repl", "ingest a story, then answer questions interactively");
    repl->add_option("story", repl_story, "story text file")->required();

    std::string system_path;
    bool force_exact = false;
    int restarts = -1;
    CLI::App* solve = app.add_subcommand("solve", "settle a standalone constraint-system file");
    solve->add_option("system", system_path, "constraint-system file")->required();
    solve->add_flag("--exact", force_exact, "force exhaustive solving");
    solve->add_option("--restarts", restarts, "stochastic restart count");

    std::string trace_story;
    CLI::App* trace = app.add_subcommand("trace", "dump pipeline stages for a story");
    trace->add_option("story", trace_story, "story text file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed()) {
            deepread::SolveConfig solver;
            if (seed >= 0) solver.seed = static_cast<uint64_t>(seed);
            if (restarts > 0) solver.max_restarts = restarts;
            deepread::SolveResult result = deepread::cmd_solve(system_path, solver, force_exact);
            std::cout << result.output;
            return result.exit_code;
        }

        if (config_path.empty()) {
            std::cerr << "error: --config is required for this command\n";
            return 1;
        }
        deepread::RunConfig config = deepread::load_config(config_path);
        if (seed >= 0) config.narrative.solver.seed = static_cast<uint64_t>(seed);
        if (budget > 0) config.narrative.budget.max_tasks = budget;
        if (no_timestamps) config.timestamps = false;

        if (understand->parsed()) {
            deepread::UnderstandResult result =
                deepread::cmd_understand(config, story_path, question_paths);
            std::cout << result.report;
            return result.exit_code;
        }
        if (repl->parsed()) {
            return deepread::cmd_repl(config, repl_story, std::cin, std::cout);
        }
        if (trace->parsed()) {
            std::cout << deepread::cmd_trace(config, trace_story);
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
