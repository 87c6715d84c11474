#pragma once

#include "schedcycle/task_model.hpp"

#include <optional>
#include <string>
#include <vector>

namespace schedcycle {

// A bound is either a tick value or a reason why it cannot be computed in
// this context. Never a silent number.
struct BoundValue {
    std::optional<Tick> value;
    std::string note;

    static BoundValue of(Tick v, std::string note = {}) { return {v, std::move(note)}; }
    static BoundValue not_applicable(std::string why) { return {std::nullopt, std::move(why)}; }

    bool applicable() const { return value.has_value(); }
    bool operator==(const BoundValue &) const = default;
};

// Task ids, highest priority first.
using PriorityOrder = std::vector<TaskId>;

/// Iterative priority-ordered start point for independent constrained-deadline
/// FTP systems. The simulation interval is [0, S_n + H).
BoundValue sn_bound(const TaskSystem &system, const PriorityOrder &order);

/// Same recurrence with an added lcm of the first i periods at every step, for
/// arbitrary deadlines. The simulation interval is [0, Ŝ_n + H].
BoundValue sn_hat_bound(const TaskSystem &system, const PriorityOrder &order);

/// H * prod((O_i + D_i - T_i)_0 + 1). Valid for any deterministic memoryless
/// scheduler under offset-independent constraints.
Tick general_product_bound(const TaskSystem &system);

/// H * prod((D_i - T_i)_0 + 1); synchronous systems only.
BoundValue sync_product_bound(const TaskSystem &system);

Tick leung_bound(const TaskSystem &system);

struct BoundsReport {
    Tick hyperperiod = 0;
    BoundValue leung;                  // O^max + 2H end point
    BoundValue sn;                     // S_n
    BoundValue sn_interval_end;        // S_n + H
    BoundValue sn_hat;                 // Ŝ_n
    BoundValue sn_hat_interval_end;    // Ŝ_n + H
    Tick sync_product_end = 0;         // on synchronize(system)
    Tick general_product_end = 0;
    Tick best = 0;
    std::string best_source;
    std::vector<std::string> applicability_notes;

    bool operator==(const BoundsReport &) const = default;
};

BoundsReport bounds_report(const TaskSystem &system, const std::optional<PriorityOrder> &order = std::nullopt);

// Checks that `order` is a permutation of the system's task ids.
void require_priority_order(const TaskSystem &system, const PriorityOrder &order);

} // namespace schedcycle
