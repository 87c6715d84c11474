#pragma once

#include "schedcycle/common.hpp"
#include "schedcycle/rational.hpp"

#include <optional>
#include <string>
#include <vector>

namespace schedcycle {

struct Task {
    TaskId id = 0;
    Tick offset = 0;
    Tick wcet = 1;
    Tick period = 1;
    Tick deadline = 1;               // relative
    std::optional<int> priority;     // lower value = higher priority

    bool operator==(const Task &) const = default;
};

enum class ConstraintKind { precedes, excludes, suspends, non_preemptive };

/// Job-granularity structural constraint between tasks.
///
///   precedes(first, second):      job k of `first` completes before job k of `second` starts
///   excludes(first, second):      the two tasks never execute in the same tick
///   suspends(first, after, delay): every job of `first` self-suspends for `delay` ticks
///                                  once it has executed `after` ticks
///   non_preemptive(first):        a started job runs every tick until it completes
///                                  (it may be blocked, never preempted)
///
/// All four only constrain the relative order of execution units, so they stay
/// satisfied when releases move earlier.
struct StructuralConstraint {
    ConstraintKind kind = ConstraintKind::precedes;
    TaskId first = 0;
    TaskId second = 0;   // precedes / excludes only
    Tick after = 0;      // suspends only
    Tick delay = 0;      // suspends only

    static StructuralConstraint precedes(TaskId producer, TaskId consumer);
    static StructuralConstraint excludes(TaskId a, TaskId b);
    static StructuralConstraint suspends(TaskId task, Tick after, Tick delay);
    static StructuralConstraint non_preemptive(TaskId task);

    bool operator==(const StructuralConstraint &) const = default;
};

const char *to_string(ConstraintKind kind);

// Tasks are stored by id: tasks[i].id == i + 1 for a valid system.
struct TaskSystem {
    std::vector<Task> tasks;
    int processors = 1;
    std::vector<StructuralConstraint> constraints;

    std::size_t size() const { return tasks.size(); }
    const Task &task(TaskId id) const { return tasks.at(static_cast<std::size_t>(id - 1)); }

    bool operator==(const TaskSystem &) const = default;
};

struct JobId {
    TaskId task = 0;
    Tick index = 0;   // 0-based job number

    Tick release(const TaskSystem &system) const;
    Tick absolute_deadline(const TaskSystem &system) const;

    bool operator==(const JobId &) const = default;
    auto operator<=>(const JobId &) const = default;
};

struct Diagnostic {
    enum class Severity { error, warning };
    Severity severity = Severity::error;
    std::string message;

    bool is_error() const { return severity == Severity::error; }
};

Tick hyperperiod(const TaskSystem &system);
Rational utilization(const TaskSystem &system);
Tick max_offset(const TaskSystem &system);

// Release every task at 0 and stretch its deadline by its former offset, so
// every job keeps its absolute deadline while its release moves earlier.
TaskSystem synchronize(const TaskSystem &system);

bool is_synchronous(const TaskSystem &system);
bool has_constrained_deadlines(const TaskSystem &system);

std::vector<Diagnostic> validate(const TaskSystem &system);

// Throws InputError listing every error-level diagnostic.
void require_valid(const TaskSystem &system);

} // namespace schedcycle
