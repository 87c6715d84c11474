#include "schedcycle/bounds.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace schedcycle {

void require_priority_order(const TaskSystem &system, const PriorityOrder &order) {
    std::set<TaskId> seen;
    for (TaskId id : order) {
        if (id < 1 || id > static_cast<TaskId>(system.size()))
            throw ConfigError("priority order names unknown task " + std::to_string(id));
        if (!seen.insert(id).second)
            throw ConfigError("priority order lists task " + std::to_string(id) + " twice");
    }
    if (seen.size() != system.size())
        throw ConfigError("priority order must list all " + std::to_string(system.size()) + " tasks");
}

namespace {

// max(O_i, O_i + ceil((prev - O_i) / T_i) * T_i): the first release of task i at or after prev.
Tick first_release_at_or_after(const Task &t, Tick prev) {
    Tick k = ceil_div(prev - t.offset, t.period);
    Tick aligned = checked_add(t.offset, checked_mul(k, t.period, "start-point recurrence"), "start-point recurrence");
    return std::max(t.offset, aligned);
}

std::string factor_breakdown(const std::vector<Tick> &factors, Tick h, Tick result) {
    std::ostringstream os;
    for (std::size_t i = 0; i < factors.size(); ++i)
        os << (i ? "*" : "") << factors[i];
    if (factors.empty())
        os << "1";
    os << "*H(" << h << ") = " << result;
    return os.str();
}

} // namespace

BoundValue sn_bound(const TaskSystem &system, const PriorityOrder &order) {
    require_priority_order(system, order);
    for (const Task &t : system.tasks) {
        if (t.deadline > t.period)
            return BoundValue::not_applicable("sn: task " + std::to_string(t.id) + " has D > T (" +
                                              std::to_string(t.deadline) + " > " + std::to_string(t.period) +
                                              "); requires constrained deadlines");
    }
    if (order.empty())
        return BoundValue::of(0);
    Tick s = system.task(order.front()).offset;
    for (std::size_t i = 1; i < order.size(); ++i)
        s = first_release_at_or_after(system.task(order[i]), s);
    return BoundValue::of(s);
}

BoundValue sn_hat_bound(const TaskSystem &system, const PriorityOrder &order) {
    require_priority_order(system, order);
    if (order.empty())
        return BoundValue::of(0);
    const Task &top = system.task(order.front());
    Tick s = top.offset;
    Tick prefix_lcm = top.period;
    for (std::size_t i = 1; i < order.size(); ++i) {
        const Task &t = system.task(order[i]);
        prefix_lcm = checked_lcm(prefix_lcm, t.period, "prefix lcm at task " + std::to_string(t.id));
        s = checked_add(first_release_at_or_after(t, s), prefix_lcm, "Ŝ recurrence");
    }
    return BoundValue::of(s);
}

namespace {

Tick product_bound(const TaskSystem &system, bool with_offsets, std::vector<Tick> *factors) {
    Tick h = hyperperiod(system);
    Tick result = h;
    for (const Task &t : system.tasks) {
        Tick lag = t.deadline - t.period + (with_offsets ? t.offset : 0);
        Tick f = std::max<Tick>(lag, 0) + 1;
        if (factors)
            factors->push_back(f);
        result = checked_mul(result, f, "product bound factor of task " + std::to_string(t.id));
    }
    return result;
}

} // namespace

Tick general_product_bound(const TaskSystem &system) { return product_bound(system, true, nullptr); }

BoundValue sync_product_bound(const TaskSystem &system) {
    for (const Task &t : system.tasks) {
        if (t.offset != 0)
            return BoundValue::not_applicable("sync_product: task " + std::to_string(t.id) +
                                              " has a non-zero offset; synchronize the system first");
    }
    return BoundValue::of(product_bound(system, false, nullptr));
}

Tick leung_bound(const TaskSystem &system) {
    Tick h = hyperperiod(system);
    return checked_add(max_offset(system), checked_mul(2, h, "O^max + 2H"), "O^max + 2H");
}

BoundsReport bounds_report(const TaskSystem &system, const std::optional<PriorityOrder> &order) {
    BoundsReport r;
    r.hyperperiod = hyperperiod(system);
    const bool independent = system.constraints.empty();

    std::vector<Tick> factors;
    r.general_product_end = product_bound(system, true, &factors);
    r.applicability_notes.push_back("general_product: " + factor_breakdown(factors, r.hyperperiod, r.general_product_end) +
                                    "; applies to every deterministic memoryless scheduler");

    r.sync_product_end = product_bound(synchronize(system), false, nullptr);
    r.applicability_notes.push_back("sync_product: evaluated on the synchronized system (O'=0, D'=D+O)");

    Tick leung = leung_bound(system);
    if (system.processors == 1 && independent && order) {
        r.leung = BoundValue::of(leung, "uniprocessor fixed-task-priority context");
        r.applicability_notes.push_back("leung: applicable (m=1, independent tasks, priority order given)");
    } else {
        std::string why = system.processors != 1 ? "requires a uniprocessor platform"
                          : !independent         ? "requires independent tasks"
                                                 : "requires a fixed-task-priority or EDF context (give a priority order)";
        r.leung = BoundValue::not_applicable("leung: " + why + "; value " + std::to_string(leung) +
                                             " shown for reference only");
        r.applicability_notes.push_back(r.leung.note);
    }

    auto priority_based = [&](const char *name, BoundValue BoundsReport::*start, BoundValue BoundsReport::*end,
                              auto compute) {
        if (!order) {
            r.*start = BoundValue::not_applicable(std::string(name) + ": needs a priority order");
        } else if (!independent) {
            r.*start = BoundValue::not_applicable(std::string(name) + ": requires independent tasks");
        } else {
            r.*start = compute(system, *order);
        }
        if ((r.*start).applicable()) {
            r.*end = BoundValue::of(checked_add(*(r.*start).value, r.hyperperiod, name));
            r.applicability_notes.push_back(std::string(name) + ": applicable, start " +
                                            std::to_string(*(r.*start).value) + ", interval end " +
                                            std::to_string(*(r.*end).value));
        } else {
            r.*end = BoundValue::not_applicable((r.*start).note);
            r.applicability_notes.push_back((r.*start).note);
        }
    };
    priority_based("sn", &BoundsReport::sn, &BoundsReport::sn_interval_end, sn_bound);
    priority_based("sn_hat", &BoundsReport::sn_hat, &BoundsReport::sn_hat_interval_end, sn_hat_bound);

    r.best = r.general_product_end;
    r.best_source = "general_product";
    auto consider = [&](Tick v, const char *source) {
        if (v < r.best) {
            r.best = v;
            r.best_source = source;
        }
    };
    consider(r.sync_product_end, "sync_product");
    if (r.sn_interval_end.applicable())
        consider(*r.sn_interval_end.value, "sn_interval_end");
    if (r.sn_hat_interval_end.applicable())
        consider(*r.sn_hat_interval_end.value, "sn_hat_interval_end");
    if (r.leung.applicable())
        consider(*r.leung.value, "leung");
    return r;
}

} // namespace schedcycle
