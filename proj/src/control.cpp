#include "deepread/control.hpp"

#include <algorithm>

namespace deepread {

std::string action_kind_name(ControlAction::Kind k) {
    switch (k) {
        case ControlAction::Kind::StopTask: return "stop-task";
        case ControlAction::Kind::Deprioritize: return "deprioritize";
        case ControlAction::Kind::Remember: return "remember";
        case ControlAction::Kind::RaiseLevel: return "raise-level";
        case ControlAction::Kind::LowerLevel: return "lower-level";
        case ControlAction::Kind::Reread: return "reread";
    }
    return "?";
}

std::string LogEntry::line() const {
    std::string s = "task " + std::to_string(task) + " " + kind + " depth=" + std::to_string(depth) +
                    " -> " + outcome;
    if (!rule.empty()) s += " [rule=" + rule + "]";
    return s;
}

std::vector<ControlAction> apply_rules(const AgendaStats& stats, const Budget& budget,
                                       const DiscourseSignals& signals) {
    std::vector<ControlAction> actions;
    for (const auto& [sig, count] : stats.signature_counts)
        if (count >= 3) actions.push_back({ControlAction::Kind::StopTask, "repeat", sig});
    if (!budget.relevance_tags.empty() && stats.executed * 4 > budget.max_tasks) {
        for (const auto& [tag, count] : stats.executed_by_tag) {
            if (tag.empty()) continue;
            if (std::find(budget.relevance_tags.begin(), budget.relevance_tags.end(), tag) ==
                budget.relevance_tags.end())
                actions.push_back({ControlAction::Kind::StopTask, "relevance", tag});
        }
    }
    if (signals.infeasible_settlement)
        actions.push_back({ControlAction::Kind::Reread, "confusion", ""});
    if (signals.previous_score > 0 && signals.current_score >= 0 &&
        signals.current_score < 0.5 * signals.previous_score)
        actions.push_back({ControlAction::Kind::Reread, "score-drop", ""});
    if (signals.unanswered_question)
        actions.push_back({ControlAction::Kind::LowerLevel, "specificity", ""});
    return actions;
}

bool Agenda::submit(Task task) {
    task.id = next_id_++;
    stats_.signature_counts[task.signature]++;
    auto blocked = blocked_.find(task.signature);
    if (blocked != blocked_.end()) {
        log_.push_back({task.id, task.kind, task.depth, "rejected", blocked->second});
        return false;
    }
    if (stats_.signature_counts[task.signature] > 1) return false;  // dedup: counter bumped, queue keeps one
    if (stats_.executed + static_cast<int>(queue_.size()) >= budget_.max_tasks) {
        log_.push_back({task.id, task.kind, task.depth, "rejected", "budget"});
        return false;
    }
    queue_.push_back(std::move(task));
    stats_.queued = static_cast<int>(queue_.size());
    return true;
}

void Agenda::post_execution_rules(const DiscourseSignals& signals) {
    std::vector<ControlAction> fired = apply_rules(stats_, budget_, signals);

    // the detail rule watches the queue directly: anything past max-depth is
    // cut and the work resumes at the parent level
    bool too_deep = false;
    for (const auto& t : queue_)
        if (t.depth > budget_.max_depth) too_deep = true;
    if (too_deep) fired.push_back({ControlAction::Kind::RaiseLevel, "detail", ""});

    for (const auto& action : fired) {
        bool seen = false;
        for (const auto& prior : actions_)
            if (prior.kind == action.kind && prior.rule == action.rule &&
                prior.signature == action.signature)
                seen = true;
        if (!seen) actions_.push_back(action);
        switch (action.kind) {
            case ControlAction::Kind::StopTask: {
                blocked_[action.signature] = action.rule;
                for (auto it = queue_.begin(); it != queue_.end();) {
                    if (it->signature == action.signature || it->relevance == action.signature) {
                        log_.push_back({it->id, it->kind, it->depth, "stopped", action.rule});
                        it = queue_.erase(it);
                    } else {
                        ++it;
                    }
                }
                break;
            }
            case ControlAction::Kind::RaiseLevel: {
                for (auto it = queue_.begin(); it != queue_.end();) {
                    if (it->depth > budget_.max_depth) {
                        log_.push_back({it->id, it->kind, it->depth, "stopped", "detail"});
                        it = queue_.erase(it);
                    } else {
                        ++it;
                    }
                }
                break;
            }
            case ControlAction::Kind::Reread:
                signalled_reread_ = true;
                break;
            default:
                break;
        }
    }
    stats_.queued = static_cast<int>(queue_.size());
}

void Agenda::run(const TaskExecutor& executor, const DiscourseSignals& signals) {
    post_execution_rules(signals);
    while (!queue_.empty() && stats_.executed < budget_.max_tasks) {
        auto best = queue_.begin();
        for (auto it = queue_.begin(); it != queue_.end(); ++it)
            if (it->priority > best->priority || (it->priority == best->priority && it->id < best->id))
                best = it;
        Task task = *best;
        queue_.erase(best);

        if (task.depth > budget_.max_depth) {
            // never execute below the detail threshold
            log_.push_back({task.id, task.kind, task.depth, "stopped", "detail"});
            bool seen = false;
            for (const auto& prior : actions_)
                if (prior.kind == ControlAction::Kind::RaiseLevel) seen = true;
            if (!seen) actions_.push_back({ControlAction::Kind::RaiseLevel, "detail", ""});
            continue;
        }
        if (blocked_.count(task.signature)) {
            log_.push_back({task.id, task.kind, task.depth, "stopped", "repeat"});
            continue;
        }

        TaskResult result = executor(task);
        stats_.executed++;
        stats_.executed_by_tag[task.relevance]++;
        log_.push_back({task.id, task.kind, task.depth, "done", ""});
        if (result.good) {
            actions_.push_back({ControlAction::Kind::Remember, "good-work", task.signature});
            hints_[task.signature] = result.note;
        }
        for (auto& spawned : result.spawned) submit(std::move(spawned));
        post_execution_rules(signals);
    }
}

void Agenda::signal(const DiscourseSignals& signals) {
    post_execution_rules(signals);
}

bool Agenda::reread_requested() const {
    return signalled_reread_;
}

}  // namespace deepread
