#include "schedcycle/sched_core.hpp"

#include <algorithm>
#include <sstream>
#include <type_traits>

namespace schedcycle {

namespace {

std::size_t idx(TaskId id) { return static_cast<std::size_t>(id - 1); }

bool has_suspends(const TaskSystem &system) {
    return std::any_of(system.constraints.begin(), system.constraints.end(),
                       [](const StructuralConstraint &c) { return c.kind == ConstraintKind::suspends; });
}

const StructuralConstraint *suspends_of(const TaskSystem &system, TaskId task) {
    for (const StructuralConstraint &c : system.constraints)
        if (c.kind == ConstraintKind::suspends && c.first == task)
            return &c;
    return nullptr;
}

bool is_non_preemptive(const TaskSystem &system, TaskId task) {
    return std::any_of(system.constraints.begin(), system.constraints.end(), [&](const StructuralConstraint &c) {
        return c.kind == ConstraintKind::non_preemptive && c.first == task;
    });
}

std::size_t precedes_count(const TaskSystem &system) {
    return static_cast<std::size_t>(
        std::count_if(system.constraints.begin(), system.constraints.end(),
                      [](const StructuralConstraint &c) { return c.kind == ConstraintKind::precedes; }));
}

// Relative deadline of the oldest pending job of task i.
Tick oldest_deadline_in(const Task &t, Tick backlog, Tick clock) {
    Tick pending = pending_job_count(backlog, t.wcet);
    return t.deadline - clock - (pending - 1) * t.period;
}

} // namespace

Tick head_job_remaining(Tick backlog, Tick wcet) { return backlog <= 0 ? 0 : (backlog - 1) % wcet + 1; }

Tick pending_job_count(Tick backlog, Tick wcet) { return backlog <= 0 ? 0 : (backlog + wcet - 1) / wcet; }

Tick normalize_clock(Tick clock, Tick period) { return clock < 0 && -clock < period ? period + clock : clock; }

SystemState initial_state(const TaskSystem &system) {
    SystemState s;
    const std::size_t n = system.size();
    s.remaining.assign(n, 0);
    s.clocks.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        const Task &t = system.tasks[i];
        s.clocks[i] = normalize_clock(-t.offset, t.period);
        if (t.offset == 0)
            s.remaining[i] = t.wcet;
    }
    if (has_suspends(system))
        s.suspension.assign(n, 0);
    s.precedence_gap.assign(precedes_count(system), 0);
    return s;
}

PreState pre_state(const TaskSystem &system, const SystemState &state) {
    PreState p{state.remaining, state.clocks};
    for (std::size_t i = 0; i < system.size(); ++i)
        if (state.clocks[i] == 0)
            p.remaining[i] -= system.tasks[i].wcet;
    return p;
}

std::vector<ReadyJob> eligible_jobs(const TaskSystem &system, const SystemState &state) {
    std::vector<ReadyJob> out;
    for (std::size_t i = 0; i < system.size(); ++i) {
        const Task &t = system.tasks[i];
        if (state.remaining[i] <= 0)
            continue;
        if (!state.suspension.empty() && state.suspension[i] > 0)
            continue;
        bool blocked = false;
        std::size_t k = 0;
        for (const StructuralConstraint &c : system.constraints) {
            if (c.kind != ConstraintKind::precedes)
                continue;
            if (c.second == t.id && state.precedence_gap[k] < 1)
                blocked = true;
            ++k;
        }
        if (blocked)
            continue;
        Tick head = head_job_remaining(state.remaining[i], t.wcet);
        out.push_back({t.id, head, oldest_deadline_in(t, state.remaining[i], state.clocks[i]), head < t.wcet});
    }
    return out;
}

std::vector<TaskId> mandatory_jobs(const TaskSystem &system, const SystemState &state) {
    std::vector<TaskId> out;
    for (const ReadyJob &j : eligible_jobs(system, state))
        if (j.started && is_non_preemptive(system, j.task))
            out.push_back(j.task);
    return out;
}

bool excluded_pair(const TaskSystem &system, TaskId a, TaskId b) {
    for (const StructuralConstraint &c : system.constraints) {
        if (c.kind != ConstraintKind::excludes)
            continue;
        if ((c.first == a && c.second == b) || (c.first == b && c.second == a))
            return true;
    }
    return false;
}

void validate_decision(const TaskSystem &system, const SystemState &state, const Decision &decision) {
    auto fail = [](const std::string &rule, const std::string &detail) {
        throw InvalidDecision("invalid decision (" + rule + "): " + detail);
    };
    if (static_cast<Tick>(decision.size()) > system.processors)
        fail("processors", std::to_string(decision.size()) + " jobs on " + std::to_string(system.processors) +
                               " processors");

    const std::vector<ReadyJob> ready = eligible_jobs(system, state);
    auto in = [](const auto &v, TaskId id) {
        return std::any_of(v.begin(), v.end(), [&](const auto &x) {
            if constexpr (std::is_same_v<std::decay_t<decltype(x)>, ReadyJob>)
                return x.task == id;
            else
                return x == id;
        });
    };
    for (std::size_t a = 0; a < decision.size(); ++a) {
        TaskId id = decision[a];
        for (std::size_t b = a + 1; b < decision.size(); ++b)
            if (decision[b] == id)
                fail("one job per task", "task " + std::to_string(id) + " selected twice");
        if (!in(ready, id))
            fail("eligibility", "task " + std::to_string(id) + " has no eligible job");
        for (std::size_t b = a + 1; b < decision.size(); ++b)
            if (excluded_pair(system, id, decision[b]))
                fail("excludes", "tasks " + std::to_string(id) + " and " + std::to_string(decision[b]) +
                                     " co-scheduled");
    }

    const std::vector<TaskId> mandatory = mandatory_jobs(system, state);
    std::size_t mandatory_running = 0;
    for (TaskId id : mandatory)
        if (in(decision, id))
            ++mandatory_running;
    for (TaskId id : mandatory) {
        if (in(decision, id))
            continue;
        if (mandatory_running >= static_cast<std::size_t>(system.processors))
            continue;
        bool blocked = std::any_of(mandatory.begin(), mandatory.end(),
                                   [&](TaskId other) { return in(decision, other) && excluded_pair(system, id, other); });
        if (!blocked)
            fail("non_preemptive", "started job of task " + std::to_string(id) + " was preempted");
    }
}

StepResult step(const TaskSystem &system, const SystemState &state, const Decision &decision) {
    validate_decision(system, state, decision);

    StepResult r{state, {}, {}};
    SystemState &next = r.next;
    for (Tick &s : next.suspension)
        if (s > 0)
            --s;

    for (TaskId id : decision) {
        const std::size_t i = idx(id);
        const Task &t = system.tasks[i];
        const Tick head = head_job_remaining(state.remaining[i], t.wcet);
        --next.remaining[i];
        if (head == 1) {
            r.completed.push_back(id);
        } else if (const StructuralConstraint *c = suspends_of(system, id)) {
            if (t.wcet - (head - 1) == c->after)
                next.suspension[i] = c->delay;
        }
    }

    std::size_t k = 0;
    for (const StructuralConstraint &c : system.constraints) {
        if (c.kind != ConstraintKind::precedes)
            continue;
        for (TaskId id : r.completed) {
            if (id == c.first)
                ++next.precedence_gap[k];
            if (id == c.second)
                --next.precedence_gap[k];
        }
        ++k;
    }

    for (std::size_t i = 0; i < system.size(); ++i) {
        const Task &t = system.tasks[i];
        Tick &clock = next.clocks[i];
        clock = clock < 0 ? normalize_clock(clock + 1, t.period) : (clock + 1) % t.period;
        if (clock == 0) {
            next.remaining[i] = checked_add(next.remaining[i], t.wcet, "backlog of task " + std::to_string(t.id));
            r.released.push_back(t.id);
        }
    }
    return r;
}

SystemState tick(const TaskSystem &system, const SystemState &state, const Decision &decision) {
    return step(system, state, decision).next;
}

bool has_overdue_work(const TaskSystem &system, const SystemState &state) {
    for (std::size_t i = 0; i < system.size(); ++i)
        if (state.remaining[i] > 0 && oldest_deadline_in(system.tasks[i], state.remaining[i], state.clocks[i]) <= 0)
            return true;
    return false;
}

const char *to_string(TraceEvent::Kind kind) {
    switch (kind) {
    case TraceEvent::Kind::release:
        return "release";
    case TraceEvent::Kind::deadline:
        return "deadline";
    case TraceEvent::Kind::completion:
        return "completion";
    case TraceEvent::Kind::miss:
        return "miss";
    }
    return "?";
}

std::optional<JobMiss> check_deadlines(const TaskSystem &system, const ScheduleTrace &trace) {
    std::optional<JobMiss> first;
    for (const Task &t : system.tasks) {
        // completion tick of each job from cumulative executed work
        std::vector<Tick> completion;
        Tick executed = 0;
        for (Tick tk = 0; tk < trace.horizon(); ++tk) {
            const auto &row = trace.assignment[static_cast<std::size_t>(tk)];
            if (std::find(row.begin(), row.end(), t.id) == row.end())
                continue;
            ++executed;
            if (executed % t.wcet == 0)
                completion.push_back(tk + 1);
        }
        for (Tick j = 0;; ++j) {
            Tick d = t.offset + j * t.period + t.deadline;
            if (d > trace.horizon())
                break;
            bool met = j < static_cast<Tick>(completion.size()) && completion[static_cast<std::size_t>(j)] <= d;
            if (!met) {
                if (!first || d < first->tick)
                    first = JobMiss{t.id, j, d};
                break;
            }
        }
    }
    return first;
}

// ------------------------------------------------------------ Simulation

Simulation::Simulation(TaskSystem system)
    : system_(std::move(system)), state_(initial_state(system_)), completed_(system_.size(), 0),
      released_(system_.size(), 0) {
    trace_.processors = system_.processors;
    std::vector<TaskId> at_zero;
    for (const Task &t : system_.tasks)
        if (t.offset == 0)
            at_zero.push_back(t.id);
    record_releases_and_deadlines(at_zero);
}

void Simulation::advance(Decision decision) {
    std::sort(decision.begin(), decision.end());
    StepResult r = step(system_, state_, decision);
    for (TaskId id : r.completed)
        trace_.events.push_back({TraceEvent::Kind::completion, id, completed_[idx(id)]++, now_ + 1});
    trace_.assignment.push_back(std::move(decision));
    state_ = std::move(r.next);
    ++now_;
    record_releases_and_deadlines(r.released);
}

void Simulation::record_releases_and_deadlines(const std::vector<TaskId> &released) {
    for (TaskId id : released)
        trace_.events.push_back({TraceEvent::Kind::release, id, released_[idx(id)]++, now_});
    for (const Task &t : system_.tasks) {
        Tick x = now_ - t.offset - t.deadline;
        if (x < 0 || x % t.period != 0)
            continue;
        Tick job = x / t.period;
        trace_.events.push_back({TraceEvent::Kind::deadline, t.id, job, now_});
        if (completed_[idx(t.id)] <= job) {
            trace_.events.push_back({TraceEvent::Kind::miss, t.id, job, now_});
            misses_.push_back({t.id, job, now_});
        }
    }
}

std::optional<JobMiss> Simulation::first_miss() const {
    if (misses_.empty())
        return std::nullopt;
    return misses_.front();
}

Simulation replay(const TaskSystem &system, const std::vector<std::vector<TaskId>> &assignment) {
    Simulation sim(system);
    for (const auto &row : assignment)
        sim.advance(row);
    return sim;
}

} // namespace schedcycle
