#include "schedcycle/schedulers.hpp"

#include "schedcycle/state_key.hpp"

#include <algorithm>
#include <set>

namespace schedcycle {

SchedulerSpec SchedulerSpec::edf() { return {SchedulerKind::global_edf, PriorityRule::deadline_monotonic, {}, nullptr}; }

SchedulerSpec SchedulerSpec::lrptf() { return {SchedulerKind::lrptf, PriorityRule::deadline_monotonic, {}, nullptr}; }

SchedulerSpec SchedulerSpec::fixed_priority(PriorityRule rule) {
    return {SchedulerKind::fixed_task_priority, rule, {}, nullptr};
}

SchedulerSpec SchedulerSpec::table_driven(std::map<std::string, Decision> table, SchedulerSpec fallback) {
    if (fallback.kind == SchedulerKind::table_driven)
        throw ConfigError("table-driven fallback must be a built-in policy");
    SchedulerSpec s{SchedulerKind::table_driven, PriorityRule::deadline_monotonic, std::move(table), nullptr};
    s.fallback = std::make_shared<const SchedulerSpec>(std::move(fallback));
    for (auto &[key, decision] : s.table)
        std::sort(decision.begin(), decision.end());
    return s;
}

std::string describe(const SchedulerSpec &spec) {
    switch (spec.kind) {
    case SchedulerKind::global_edf:
        return "edf";
    case SchedulerKind::lrptf:
        return "lrptf";
    case SchedulerKind::fixed_task_priority:
        switch (spec.priority_rule) {
        case PriorityRule::rate_monotonic:
            return "fpp:rm";
        case PriorityRule::deadline_monotonic:
            return "fpp:dm";
        case PriorityRule::explicit_list:
            return "fpp:explicit";
        }
        break;
    case SchedulerKind::table_driven:
        return "table(" + std::to_string(spec.table.size()) + " states, fallback " +
               (spec.fallback ? describe(*spec.fallback) : std::string("none")) + ")";
    }
    return "?";
}

SchedulerSpec parse_scheduler_name(const std::string &name) {
    if (name == "edf")
        return SchedulerSpec::edf();
    if (name == "lrptf")
        return SchedulerSpec::lrptf();
    if (name == "fpp:rm")
        return SchedulerSpec::fixed_priority(PriorityRule::rate_monotonic);
    if (name == "fpp:dm")
        return SchedulerSpec::fixed_priority(PriorityRule::deadline_monotonic);
    if (name == "fpp:explicit")
        return SchedulerSpec::fixed_priority(PriorityRule::explicit_list);
    throw ConfigError("unknown scheduler '" + name + "' (expected edf|lrptf|fpp:rm|fpp:dm|fpp:explicit|table:<file>)");
}

std::vector<TaskId> priority_ranking(const SchedulerSpec &spec, const TaskSystem &system) {
    std::vector<TaskId> ids;
    for (const Task &t : system.tasks)
        ids.push_back(t.id);
    switch (spec.priority_rule) {
    case PriorityRule::rate_monotonic:
        std::stable_sort(ids.begin(), ids.end(),
                         [&](TaskId a, TaskId b) { return system.task(a).period < system.task(b).period; });
        break;
    case PriorityRule::deadline_monotonic:
        std::stable_sort(ids.begin(), ids.end(),
                         [&](TaskId a, TaskId b) { return system.task(a).deadline < system.task(b).deadline; });
        break;
    case PriorityRule::explicit_list: {
        std::set<int> seen;
        for (const Task &t : system.tasks) {
            if (!t.priority)
                throw ConfigError("fixed-task-priority scheduling needs a priority for task " + std::to_string(t.id));
            if (!seen.insert(*t.priority).second)
                throw ConfigError("priority " + std::to_string(*t.priority) + " is used by more than one task");
        }
        std::sort(ids.begin(), ids.end(),
                  [&](TaskId a, TaskId b) { return *system.task(a).priority < *system.task(b).priority; });
        break;
    }
    }
    return ids;
}

void require_compatible(const SchedulerSpec &spec, const TaskSystem &system) {
    if (spec.kind == SchedulerKind::fixed_task_priority)
        (void)priority_ranking(spec, system);
    if (spec.kind == SchedulerKind::table_driven && spec.fallback)
        require_compatible(*spec.fallback, system);
}

Decision decide(const SchedulerSpec &spec, const TaskSystem &system, const SystemState &state, Tick t,
                const std::vector<ReadyJob> &eligible) {
    (void)t;
    if (spec.kind == SchedulerKind::table_driven) {
        auto it = spec.table.find(canonical_state_key(state));
        if (it != spec.table.end())
            return it->second;
        if (!spec.fallback)
            return {};
        return decide(*spec.fallback, system, state, t, eligible);
    }

    std::vector<ReadyJob> ranked = eligible;
    switch (spec.kind) {
    case SchedulerKind::global_edf:
        std::stable_sort(ranked.begin(), ranked.end(),
                         [](const ReadyJob &a, const ReadyJob &b) { return a.deadline_in < b.deadline_in; });
        break;
    case SchedulerKind::lrptf:
        std::stable_sort(ranked.begin(), ranked.end(),
                         [](const ReadyJob &a, const ReadyJob &b) { return a.job_remaining > b.job_remaining; });
        break;
    case SchedulerKind::fixed_task_priority: {
        const std::vector<TaskId> order = priority_ranking(spec, system);
        std::vector<std::size_t> rank(system.size() + 1);
        for (std::size_t r = 0; r < order.size(); ++r)
            rank[static_cast<std::size_t>(order[r])] = r;
        std::stable_sort(ranked.begin(), ranked.end(), [&](const ReadyJob &a, const ReadyJob &b) {
            return rank[static_cast<std::size_t>(a.task)] < rank[static_cast<std::size_t>(b.task)];
        });
        break;
    }
    case SchedulerKind::table_driven:
        break;
    }

    const std::vector<TaskId> mandatory = mandatory_jobs(system, state);
    std::stable_partition(ranked.begin(), ranked.end(), [&](const ReadyJob &j) {
        return std::find(mandatory.begin(), mandatory.end(), j.task) != mandatory.end();
    });

    Decision picked;
    for (const ReadyJob &j : ranked) {
        if (static_cast<int>(picked.size()) >= system.processors)
            break;
        bool conflict = std::any_of(picked.begin(), picked.end(),
                                    [&](TaskId other) { return excluded_pair(system, j.task, other); });
        if (!conflict)
            picked.push_back(j.task);
    }
    std::sort(picked.begin(), picked.end());
    return picked;
}

SchedulerSpec make_adversary_table(const TaskSystem &system, const ScheduleTrace &target) {
    require_valid(system);
    if (target.processors != system.processors)
        throw InvalidTrace("trace is for " + std::to_string(target.processors) + " processors, system has " +
                           std::to_string(system.processors));

    std::map<std::string, std::pair<Decision, Tick>> seen;
    Simulation sim(system);
    for (Tick t = 0; t < target.horizon(); ++t) {
        Decision d = target.assignment[static_cast<std::size_t>(t)];
        std::sort(d.begin(), d.end());
        std::string key = canonical_state_key(sim.state());
        auto [it, fresh] = seen.emplace(key, std::make_pair(d, t));
        if (!fresh && it->second.first != d)
            throw InvalidTrace("not memoryless: identical states at ticks " + std::to_string(it->second.second) +
                               " and " + std::to_string(t) + " receive different decisions");
        try {
            sim.advance(d);
        } catch (const InvalidDecision &e) {
            throw InvalidTrace("tick " + std::to_string(t) + ": " + e.what());
        }
    }
    if (auto miss = sim.first_miss())
        throw InvalidTrace("trace is infeasible: task " + std::to_string(miss->task) + " job " +
                           std::to_string(miss->job) + " misses its deadline at " + std::to_string(miss->tick));

    std::map<std::string, Decision> table;
    for (auto &[key, entry] : seen)
        table.emplace(key, std::move(entry.first));
    return SchedulerSpec::table_driven(std::move(table));
}

} // namespace schedcycle
