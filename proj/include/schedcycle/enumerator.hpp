#pragma once

#include "schedcycle/sched_core.hpp"

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace schedcycle {

struct GraphEdge {
    Decision decision;   // empty = both/all processors idle
    std::size_t target = 0;
};

struct GraphVertex {
    SystemState state;
    std::string key;
    Tick level = 0;       // first tick at which the state is reached
    Tick phase = 0;       // level mod H
    bool missed = false;  // a deadline has already been missed
    bool pruned = false;  // lookahead proves every continuation misses
    bool dead = false;    // every successor is missed, pruned or dead
    bool expanded = false;
    std::vector<GraphEdge> edges;
};

/// Every schedule of a small system as a state graph. Vertices are merged by
/// canonical state key; edges enumerate every valid decision, deliberate
/// idling included.
struct ScheduleGraph {
    TaskSystem system;
    Tick hyperperiod = 1;
    std::optional<Tick> depth;
    bool complete = true;   // false when some feasible vertex was left unexpanded
    std::vector<GraphVertex> vertices;   // vertices[0] is the initial state
    std::unordered_map<std::string, std::size_t> index;

    std::optional<std::size_t> find(const SystemState &state) const;
    bool survives(std::size_t v) const;
    bool has_edge(std::size_t from, const Decision &decision, std::size_t to) const;
    std::size_t survivor_count() const;
};

struct GraphOptions {
    std::optional<Tick> depth;          // default: unlimited
    std::size_t vertex_cap = 1'000'000;
};

ScheduleGraph build_graph(const TaskSystem &system, const GraphOptions &options = {});

// Necessary-condition test: true when no schedule from `state` can meet every
// pending deadline (per-job serial laxity, aggregate demand vs m * time).
bool lookahead_infeasible(const TaskSystem &system, const SystemState &state);

// A feasible schedule a memoryless scheduler can follow forever: vertices
// path[0..n-1] are distinct, and path.back() steps back to path[transient].
struct Lasso {
    std::vector<std::size_t> path;
    Tick transient = 0;
    Tick period = 0;

    Tick revisit() const { return transient + period; }
};

struct ExtremalCycles {
    Tick max_cycle_len = 0;
    Tick max_transient_len = 0;
    Tick max_revisit = 0;
    Lasso longest_cycle;
    Lasso longest_transient;
    std::size_t lassos_examined = 0;
};

struct SearchLimits {
    std::size_t max_steps = 200'000'000;
};

ExtremalCycles extremal_cycles(const ScheduleGraph &graph, const SearchLimits &limits = {});

struct BoundCheck {
    bool holds = true;
    std::optional<Lasso> counterexample;
};

// True iff every feasible memoryless lasso revisits a state by tick `bound`.
BoundCheck verify_bound(const ScheduleGraph &graph, Tick bound, const SearchLimits &limits = {});

std::string export_graph(const ScheduleGraph &graph);

} // namespace schedcycle
