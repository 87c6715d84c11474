#pragma once

#include "schedcycle/sched_core.hpp"

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace schedcycle {

enum class SchedulerKind { fixed_task_priority, global_edf, lrptf, table_driven };
enum class PriorityRule { explicit_list, rate_monotonic, deadline_monotonic };

struct SchedulerSpec {
    SchedulerKind kind = SchedulerKind::global_edf;
    PriorityRule priority_rule = PriorityRule::deadline_monotonic;

    // table_driven: canonical state key -> decision, and a non-table fallback
    // consulted for states missing from the table.
    std::map<std::string, Decision> table;
    std::shared_ptr<const SchedulerSpec> fallback;

    static SchedulerSpec edf();
    static SchedulerSpec lrptf();
    static SchedulerSpec fixed_priority(PriorityRule rule);
    static SchedulerSpec table_driven(std::map<std::string, Decision> table, SchedulerSpec fallback = edf());
};

std::string describe(const SchedulerSpec &spec);

// Parses the CLI form: edf | lrptf | fpp:rm | fpp:dm | fpp:explicit.
// table:<file> is resolved by the io layer.
SchedulerSpec parse_scheduler_name(const std::string &name);

// Task ids from highest to lowest fixed priority. Ties under RM/DM go to the
// lower task id. Throws ConfigError when an explicit order is incomplete.
std::vector<TaskId> priority_ranking(const SchedulerSpec &spec, const TaskSystem &system);

// Checks scheduler configuration against a system before a run.
void require_compatible(const SchedulerSpec &spec, const TaskSystem &system);

/// The scheduling decision for `state`: at most m eligible jobs.
///
/// Policies rank the eligible jobs (started non-preemptive jobs first), then
/// walk the ranking and keep every job that does not conflict with one
/// already picked, until the processors are full. `t` is only an annotation;
/// the result depends on (spec, system, state) alone.
Decision decide(const SchedulerSpec &spec, const TaskSystem &system, const SystemState &state, Tick t,
                const std::vector<ReadyJob> &eligible);

/// Builds the table-driven scheduler that reproduces `target` when simulated.
/// Throws InvalidTrace when the trace is infeasible or makes two different
/// decisions in one state (no memoryless scheduler can produce it).
SchedulerSpec make_adversary_table(const TaskSystem &system, const ScheduleTrace &target);

} // namespace schedcycle
