#pragma once

#include "schedcycle/schedulers.hpp"
#include "schedcycle/state_key.hpp"

#include <optional>

namespace schedcycle {

enum class Verdict { cycle_found, miss_found, horizon_exhausted };

const char *to_string(Verdict v);
Verdict parse_verdict(const std::string &s);

struct CycleReport {
    // True only when a state revisit closed the schedule and no deadline was
    // missed before it; the whole infinite schedule is then feasible.
    bool feasible = false;
    // First occurrence of the repeated state, and the distance to its revisit.
    std::optional<Tick> transient_len;
    std::optional<Tick> period_len;
    std::optional<JobMiss> first_miss;
    Tick bound_used = 0;
    Verdict verdict = Verdict::horizon_exhausted;
    // Synchronous systems only: the revisit found by comparing pre-states at
    // hyperperiod multiples.
    std::optional<Tick> aligned_transient;
    std::optional<Tick> aligned_period;

    bool operator==(const CycleReport &) const = default;
};

struct CycleOptions {
    std::optional<Tick> horizon;   // default: general_product_bound + H
    bool stop_on_miss = false;
    // Keep simulating one more period after the revisit so the trace shows
    // the repetition.
    bool extend_trace = true;
};

struct CycleRun {
    CycleReport report;
    ScheduleTrace trace;
};

CycleRun run_cycle_detection(const TaskSystem &system, const SchedulerSpec &spec, const CycleOptions &options = {});

CycleReport find_cycle(const TaskSystem &system, const SchedulerSpec &spec, std::optional<Tick> horizon = std::nullopt);

Tick default_horizon(const TaskSystem &system);

// Idle processor-ticks in the steady window [transient, transient + period).
// Throws InvariantViolation unless the count equals period * (m - U) exactly.
Tick steady_idle_count(const TaskSystem &system, const ScheduleTrace &trace, const CycleReport &report);

} // namespace schedcycle
