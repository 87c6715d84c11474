#pragma once

#include "schedcycle/cycle_detect.hpp"
#include "schedcycle/schedulers.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <vector>

namespace fixtures {

using namespace schedcycle;

inline Task task(TaskId id, Tick offset, Tick wcet, Tick period, Tick deadline, std::optional<int> priority = {}) {
    return Task{id, offset, wcet, period, deadline, priority};
}

// Two unit tasks with period 2 and a long task; m = 2 by default.
inline TaskSystem sys1(int m = 2) {
    return TaskSystem{{task(1, 0, 1, 2, 2, 1), task(2, 0, 1, 2, 2, 2), task(3, 0, 3, 4, 7, 3)}, m, {}};
}

// Uniprocessor, D1 = T1 + 1; priorities give tau2 precedence (deadline order).
inline TaskSystem sys2() { return TaskSystem{{task(1, 0, 2, 4, 5, 2), task(2, 0, 1, 4, 4, 1)}, 1, {}}; }

// Offset systems used to compare the bounds; tau1 has the higher priority.
inline TaskSystem offsets_a() { return TaskSystem{{task(1, 1, 2, 8, 7, 1), task(2, 0, 3, 8, 8, 2)}, 1, {}}; }
inline TaskSystem offsets_b() { return TaskSystem{{task(1, 1, 3, 12, 7, 1), task(2, 0, 2, 8, 9, 2)}, 1, {}}; }

// Two synchronous tasks that may each finish one tick into the next hyperperiod.
inline TaskSystem lagging_pair() { return TaskSystem{{task(1, 0, 1, 4, 5), task(2, 0, 1, 4, 5)}, 1, {}}; }

inline std::vector<SchedulerSpec> builtin_schedulers() {
    return {SchedulerSpec::edf(), SchedulerSpec::lrptf(), SchedulerSpec::fixed_priority(PriorityRule::rate_monotonic),
            SchedulerSpec::fixed_priority(PriorityRule::deadline_monotonic),
            SchedulerSpec::fixed_priority(PriorityRule::explicit_list)};
}

// n <= 3, m <= 2, T in [1,6], C in [1, min(4,T)], D in [1, 2T], O in [0,3],
// distinct explicit priorities.
inline TaskSystem random_system(std::mt19937_64 &rng) {
    auto uniform = [&](Tick lo, Tick hi) { return std::uniform_int_distribution<Tick>(lo, hi)(rng); };
    TaskSystem sys;
    sys.processors = static_cast<int>(uniform(1, 2));
    const auto n = static_cast<int>(uniform(1, 3));
    std::vector<int> prio(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        prio[static_cast<std::size_t>(i)] = i + 1;
    std::shuffle(prio.begin(), prio.end(), rng);
    for (int i = 0; i < n; ++i) {
        Tick period = uniform(1, 6);
        Tick wcet = uniform(1, std::min<Tick>(4, period));
        Tick deadline = uniform(1, 2 * period);
        Tick offset = uniform(0, 3);
        sys.tasks.push_back(task(i + 1, offset, wcet, period, deadline, prio[static_cast<std::size_t>(i)]));
    }
    return sys;
}

// ---------------------------------------------------------------- oracles

// Smallest common multiple by counting up.
inline Tick brute_lcm(Tick a, Tick b) {
    for (Tick x = a;; x += a)
        if (x % b == 0)
            return x;
}

// Job-level reference simulator for independent preemptive systems: every
// job is an explicit record, the head (oldest unfinished) job of each task
// competes, ties go to the lower task id. Policies: "edf", "lrptf", or a
// fixed ranking of task ids.
struct ReferenceJob {
    TaskId task;
    Tick release, deadline, left;
};

struct ReferenceRun {
    std::vector<std::vector<TaskId>> assignment;
    std::optional<Tick> transient, period;   // first full-state revisit
    bool missed = false;
};

inline ReferenceRun reference_simulate(const TaskSystem &sys, const std::string &policy,
                                       const std::vector<TaskId> &ranking, Tick horizon) {
    std::vector<ReferenceJob> jobs;
    ReferenceRun run;
    // Full state per tick: remaining backlog and clock per task.
    std::vector<std::vector<Tick>> states;
    for (Tick t = 0; t <= horizon; ++t) {
        for (const Task &tk : sys.tasks)
            if (t >= tk.offset && (t - tk.offset) % tk.period == 0)
                jobs.push_back({tk.id, t, t + tk.deadline, tk.wcet});
        for (const ReferenceJob &j : jobs)
            if (j.left > 0 && j.deadline <= t)
                run.missed = true;
        if (run.missed)
            return run;

        std::vector<Tick> st;
        for (const Task &tk : sys.tasks) {
            Tick backlog = 0;
            for (const ReferenceJob &j : jobs)
                if (j.task == tk.id)
                    backlog += j.left;
            st.push_back(backlog);
            Tick clock = t - tk.offset;
            if (clock >= 0)
                clock %= tk.period;
            else if (-clock < tk.period)
                clock += tk.period;
            st.push_back(clock);
        }
        for (std::size_t k = 0; k < states.size() && !run.period; ++k)
            if (states[k] == st) {
                run.transient = static_cast<Tick>(k);
                run.period = t - static_cast<Tick>(k);
            }
        if (run.period || t == horizon)
            return run;
        states.push_back(st);

        std::vector<ReferenceJob *> heads;
        for (const Task &tk : sys.tasks)
            for (ReferenceJob &j : jobs)
                if (j.task == tk.id && j.left > 0) {
                    heads.push_back(&j);
                    break;
                }
        auto rank_of = [&](TaskId id) {
            return std::find(ranking.begin(), ranking.end(), id) - ranking.begin();
        };
        std::stable_sort(heads.begin(), heads.end(), [&](const ReferenceJob *a, const ReferenceJob *b) {
            if (policy == "edf")
                return a->deadline < b->deadline;
            if (policy == "lrptf")
                return a->left > b->left;
            return rank_of(a->task) < rank_of(b->task);
        });
        std::vector<TaskId> row;
        for (std::size_t k = 0; k < heads.size() && static_cast<int>(k) < sys.processors; ++k) {
            --heads[k]->left;
            row.push_back(heads[k]->task);
        }
        std::sort(row.begin(), row.end());
        run.assignment.push_back(row);
    }
    return run;
}

} // namespace fixtures
