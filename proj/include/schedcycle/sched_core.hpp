#pragma once

#include "schedcycle/task_model.hpp"

#include <optional>
#include <vector>

namespace schedcycle {

/// Dynamic scheduling state observed at an integer tick, after the releases of
/// that tick have been applied.
///
/// For independent preemptive systems only `remaining` and `clocks` are
/// populated and the state is exactly the (remaining work, local clock) tuple.
/// Constraint runtime facts are kept alongside and take part in equality, since
/// a memoryless scheduler may observe them.
struct SystemState {
    // Total backlog of released, unfinished work per task. Jobs of a task run
    // in FIFO order and share one WCET, so the backlog splits uniquely into a
    // partially executed head job plus whole jobs.
    std::vector<Tick> remaining;
    // Local clock per task: (t - O_i) mod T_i. Before the first release it holds
    // t - O_i, a negative countdown, only while the release is at least T_i
    // ticks away; closer than that the task behaves like a finished task at
    // phase T_i - (O_i - t), so it takes that clock value.
    std::vector<Tick> clocks;
    // Ticks of self-suspension left per task; empty when the system has no
    // suspends constraint.
    std::vector<Tick> suspension;
    // Per precedes constraint: producer completions minus consumer completions.
    std::vector<Tick> precedence_gap;

    bool operator==(const SystemState &) const = default;
};

// Remaining work and clocks without the releases of the observed instant.
struct PreState {
    std::vector<Tick> remaining;
    std::vector<Tick> clocks;

    bool operator==(const PreState &) const = default;
};

// The FIFO head job of a task, as seen from a state.
struct ReadyJob {
    TaskId task = 0;
    Tick job_remaining = 0;   // work left in the head job
    Tick deadline_in = 0;     // head job's absolute deadline minus the current tick
    bool started = false;     // 0 < executed < wcet

    bool operator==(const ReadyJob &) const = default;
};

// Tasks chosen to execute in [t, t+1). At most one job per task ever runs, so
// a task id names the job (its FIFO head).
using Decision = std::vector<TaskId>;

SystemState initial_state(const TaskSystem &system);

PreState pre_state(const TaskSystem &system, const SystemState &state);

// Head jobs that may run now: released work, not suspended, precedence met.
// Sorted by task id. Exclusion and non-preemptive continuity are selection
// rules, checked by validate_decision.
std::vector<ReadyJob> eligible_jobs(const TaskSystem &system, const SystemState &state);

// Eligible started head jobs of non-preemptive tasks; they must keep running.
std::vector<TaskId> mandatory_jobs(const TaskSystem &system, const SystemState &state);

bool excluded_pair(const TaskSystem &system, TaskId a, TaskId b);

// Throws InvalidDecision naming the violated rule.
void validate_decision(const TaskSystem &system, const SystemState &state, const Decision &decision);

struct StepResult {
    SystemState next;
    std::vector<TaskId> completed;   // jobs finished by the end of the tick
    std::vector<TaskId> released;    // tasks releasing a job at the next tick
};

StepResult step(const TaskSystem &system, const SystemState &state, const Decision &decision);

// One-tick transition: execute `decision` during [t, t+1), advance clocks,
// apply the releases of t+1.
SystemState tick(const TaskSystem &system, const SystemState &state, const Decision &decision);

// True when some released job still has work at or after its deadline.
bool has_overdue_work(const TaskSystem &system, const SystemState &state);

Tick head_job_remaining(Tick backlog, Tick wcet);
Tick pending_job_count(Tick backlog, Tick wcet);
// Clock value for a task whose next release is -clock ticks away.
Tick normalize_clock(Tick clock, Tick period);

// ---------------------------------------------------------------- traces

struct TraceEvent {
    enum class Kind { release, deadline, completion, miss };
    Kind kind = Kind::release;
    TaskId task = 0;
    Tick job = 0;
    Tick tick = 0;

    bool operator==(const TraceEvent &) const = default;
};

const char *to_string(TraceEvent::Kind kind);

struct JobMiss {
    TaskId task = 0;
    Tick job = 0;
    Tick tick = 0;   // the job's absolute deadline

    bool operator==(const JobMiss &) const = default;
};

struct ScheduleTrace {
    int processors = 1;
    // assignment[t] lists the tasks executing in [t, t+1), ascending; the
    // m - size() other processors idle.
    std::vector<std::vector<TaskId>> assignment;
    std::vector<TraceEvent> events;

    Tick horizon() const { return static_cast<Tick>(assignment.size()); }
    bool operator==(const ScheduleTrace &) const = default;
};

// Earliest job whose cumulative executed work in the trace does not reach its
// WCET by its absolute deadline. Only deadlines within the horizon are judged.
std::optional<JobMiss> check_deadlines(const TaskSystem &system, const ScheduleTrace &trace);

/// Tick-by-tick driver that tracks job numbers and records a trace.
class Simulation {
  public:
    explicit Simulation(TaskSystem system);

    const TaskSystem &system() const { return system_; }
    const SystemState &state() const { return state_; }
    Tick now() const { return now_; }
    std::vector<ReadyJob> eligible() const { return eligible_jobs(system_, state_); }

    // Runs `decision` over [now, now+1). Throws InvalidDecision.
    void advance(Decision decision);

    const ScheduleTrace &trace() const { return trace_; }
    ScheduleTrace take_trace() { return std::move(trace_); }
    const std::vector<JobMiss> &misses() const { return misses_; }
    std::optional<JobMiss> first_miss() const;
    Tick completed_jobs(TaskId task) const { return completed_[static_cast<std::size_t>(task - 1)]; }

  private:
    void record_releases_and_deadlines(const std::vector<TaskId> &released);

    TaskSystem system_;
    SystemState state_;
    Tick now_ = 0;
    std::vector<Tick> completed_;
    std::vector<Tick> released_;
    ScheduleTrace trace_;
    std::vector<JobMiss> misses_;
};

// Re-executes a recorded assignment against `system` (which may differ from
// the one that produced it). Every tick is validated.
Simulation replay(const TaskSystem &system, const std::vector<std::vector<TaskId>> &assignment);

} // namespace schedcycle
