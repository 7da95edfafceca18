// control.hpp : A-Brain task agenda plus B-Brain supervisory rules —
// budgets, repetition detection, detail limiting, confusion-triggered rereads
#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace deepread {

struct Task {
    int id = 0;
    std::string kind;       // "propose", "settle", "spatial-layout-enumerate", ...
    std::string signature;  // normalized (kind + arguments) key
    int depth = 0;
    int priority = 0;
    double cost = 1.0;
    std::string relevance;  // tag checked against the budget's relevance set
};

struct Budget {
    int max_tasks = 64;
    int max_depth = 4;
    int max_tasks_per_question = 16;
    std::vector<std::string> relevance_tags;  // empty = everything relevant
};

// Observable inputs to the supervisory rules beyond agenda statistics.
struct DiscourseSignals {
    bool infeasible_settlement = false;
    double previous_score = -1;
    double current_score = -1;
    bool unanswered_question = false;
};

struct ControlAction {
    enum class Kind { StopTask, Deprioritize, Remember, RaiseLevel, LowerLevel, Reread };
    Kind kind = Kind::StopTask;
    std::string rule;       // rule id that fired
    std::string signature;  // target task signature, when applicable
};

std::string action_kind_name(ControlAction::Kind k);

struct LogEntry {
    int task = 0;
    std::string kind;
    int depth = 0;
    std::string outcome;  // done | stopped | rejected
    std::string rule;     // rule id for stopped/rejected entries

    std::string line() const;
};

struct TaskResult {
    std::vector<Task> spawned;
    bool good = false;  // worth remembering (B-Brain hint cache)
    std::string note;
};

using TaskExecutor = std::function<TaskResult(const Task&)>;

// Built-in B-Brain rules, fired deterministically by apply_rules:
//   repeat     signature seen >= 3 times        -> stop-task
//   detail     task depth > budget max-depth    -> raise-level (children cut)
//   relevance  irrelevant tag past 25% budget   -> stop-task
//   confusion  infeasible settlement signal     -> reread
//   score-drop optimum fell by more than half   -> reread
//   good-work  executor flagged a good result   -> remember
struct AgendaStats {
    std::map<std::string, int> signature_counts;
    int executed = 0;
    int queued = 0;
    std::map<std::string, int> executed_by_tag;
};

std::vector<ControlAction> apply_rules(const AgendaStats& stats, const Budget& budget,
                                       const DiscourseSignals& signals);

class Agenda {
public:
    explicit Agenda(Budget budget) : budget_(std::move(budget)) {}

    // Queues by priority. A duplicate signature bumps its repetition counter
    // instead of enqueueing; past max-tasks the task is rejected and logged.
    bool submit(Task task);

    // Executes queued tasks in priority order, consulting the supervisory
    // rules after each. Reread directives raised by the rules are collected
    // for the caller. Returns when the agenda empties or the budget is spent.
    void run(const TaskExecutor& executor, const DiscourseSignals& signals);

    void signal(const DiscourseSignals& signals);  // rule pass without execution

    const std::vector<LogEntry>& log() const { return log_; }
    const std::vector<ControlAction>& actions() const { return actions_; }
    const AgendaStats& stats() const { return stats_; }
    bool reread_requested() const;
    const std::map<std::string, std::string>& hint_cache() const { return hints_; }

private:
    void post_execution_rules(const DiscourseSignals& signals);

    Budget budget_;
    std::vector<Task> queue_;
    std::vector<LogEntry> log_;
    std::vector<ControlAction> actions_;
    AgendaStats stats_;
    std::map<std::string, std::string> hints_;
    std::map<std::string, std::string> blocked_;  // stopped signature -> rule id
    int next_id_ = 1;
    bool signalled_reread_ = false;
};

}  // namespace deepread
