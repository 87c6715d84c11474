#include "schedcycle/enumerator.hpp"

#include "schedcycle/state_key.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <map>
#include <sstream>

namespace schedcycle {

std::optional<std::size_t> ScheduleGraph::find(const SystemState &state) const {
    auto it = index.find(canonical_state_key(state));
    if (it == index.end())
        return std::nullopt;
    return it->second;
}

bool ScheduleGraph::survives(std::size_t v) const {
    const GraphVertex &x = vertices[v];
    return !x.missed && !x.pruned && !x.dead;
}

bool ScheduleGraph::has_edge(std::size_t from, const Decision &decision, std::size_t to) const {
    Decision sorted = decision;
    std::sort(sorted.begin(), sorted.end());
    const auto &edges = vertices[from].edges;
    return std::any_of(edges.begin(), edges.end(),
                       [&](const GraphEdge &e) { return e.target == to && e.decision == sorted; });
}

std::size_t ScheduleGraph::survivor_count() const {
    std::size_t n = 0;
    for (std::size_t v = 0; v < vertices.size(); ++v)
        n += survives(v) ? 1 : 0;
    return n;
}

bool lookahead_infeasible(const TaskSystem &system, const SystemState &state) {
    // (relative deadline, work due by it)
    std::vector<std::pair<Tick, Tick>> due;
    Tick horizon = 0;
    for (std::size_t i = 0; i < system.size(); ++i) {
        const Task &t = system.tasks[i];
        const Tick backlog = state.remaining[i];
        if (backlog <= 0)
            continue;
        const Tick pending = pending_job_count(backlog, t.wcet);
        const Tick head = head_job_remaining(backlog, t.wcet);
        const Tick blocked = state.suspension.empty() ? 0 : state.suspension[i];
        for (Tick k = 0; k < pending; ++k) {
            const Tick rel = t.deadline - state.clocks[i] - (pending - 1 - k) * t.period;
            const Tick serial_work = head + k * t.wcet;
            if (serial_work + blocked > rel)
                return true;
            due.emplace_back(rel, k == 0 ? head : t.wcet);
            horizon = std::max(horizon, rel);
        }
    }
    if (due.empty())
        return false;

    for (std::size_t i = 0; i < system.size(); ++i) {
        const Task &t = system.tasks[i];
        const Tick clock = state.clocks[i];
        for (Tick r = clock < 0 ? -clock : t.period - clock; r + t.deadline <= horizon; r += t.period)
            due.emplace_back(r + t.deadline, t.wcet);
    }
    std::sort(due.begin(), due.end());
    Tick demand = 0;
    for (std::size_t k = 0; k < due.size(); ++k) {
        demand += due[k].second;
        const bool last_at_deadline = k + 1 == due.size() || due[k + 1].first != due[k].first;
        if (last_at_deadline && demand > system.processors * due[k].first)
            return true;
    }
    return false;
}

namespace {

std::vector<Decision> all_decisions(const TaskSystem &system, const SystemState &state) {
    const std::vector<ReadyJob> ready = eligible_jobs(system, state);
    const std::size_t e = ready.size();
    std::vector<Decision> out;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << e); ++mask) {
        if (std::popcount(mask) > system.processors)
            continue;
        Decision d;
        for (std::size_t b = 0; b < e; ++b)
            if (mask & (std::uint64_t{1} << b))
                d.push_back(ready[b].task);
        try {
            validate_decision(system, state, d);
        } catch (const InvalidDecision &) {
            continue;
        }
        out.push_back(std::move(d));
    }
    return out;
}

} // namespace

ScheduleGraph build_graph(const TaskSystem &system, const GraphOptions &options) {
    require_valid(system);
    if (system.size() > 20)
        throw LimitExceeded("enumeration supports at most 20 tasks");

    ScheduleGraph g;
    g.system = system;
    g.hyperperiod = hyperperiod(system);
    g.depth = options.depth;

    auto intern = [&](SystemState s, Tick level) -> std::pair<std::size_t, bool> {
        std::string key = canonical_state_key(s);
        auto [it, fresh] = g.index.emplace(key, g.vertices.size());
        if (fresh) {
            if (g.vertices.size() >= options.vertex_cap)
                throw LimitExceeded("schedule graph exceeds " + std::to_string(options.vertex_cap) +
                                    " vertices; try a smaller system or a lower --depth");
            GraphVertex v;
            v.state = std::move(s);
            v.key = std::move(key);
            v.level = level;
            v.phase = level % g.hyperperiod;
            g.vertices.push_back(std::move(v));
        }
        return {it->second, fresh};
    };

    std::deque<std::size_t> queue;
    queue.push_back(intern(initial_state(system), 0).first);
    while (!queue.empty()) {
        const std::size_t v = queue.front();
        queue.pop_front();
        {
            GraphVertex &x = g.vertices[v];
            if (has_overdue_work(system, x.state)) {
                x.missed = true;
                continue;
            }
            if (lookahead_infeasible(system, x.state)) {
                x.pruned = true;
                continue;
            }
            if (g.depth && x.level >= *g.depth) {
                g.complete = false;
                continue;
            }
        }
        const SystemState state = g.vertices[v].state;
        const Tick level = g.vertices[v].level;
        std::vector<GraphEdge> edges;
        for (Decision &d : all_decisions(system, state)) {
            auto [target, fresh] = intern(tick(system, state, d), level + 1);
            if (fresh)
                queue.push_back(target);
            edges.push_back({std::move(d), target});
        }
        g.vertices[v].edges = std::move(edges);
        g.vertices[v].expanded = true;
    }

    // Vertices all of whose successors are doomed are doomed too.
    for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t v = 0; v < g.vertices.size(); ++v) {
            GraphVertex &x = g.vertices[v];
            if (!x.expanded || !g.survives(v))
                continue;
            bool any = std::any_of(x.edges.begin(), x.edges.end(),
                                   [&](const GraphEdge &e) { return g.survives(e.target); });
            if (!any) {
                x.dead = true;
                changed = true;
            }
        }
    }
    return g;
}

// ---------------------------------------------------------- lasso search

namespace {

// Enumerates every simple path from the initial vertex through surviving
// vertices; each edge back onto the path closes a lasso. `visit` returns
// false to stop early.
template <typename Visit>
void for_each_lasso(const ScheduleGraph &g, const SearchLimits &limits, Visit &&visit) {
    if (g.vertices.empty() || !g.survives(0))
        return;

    std::vector<std::vector<std::size_t>> succ(g.vertices.size());
    for (std::size_t v = 0; v < g.vertices.size(); ++v) {
        if (!g.survives(v))
            continue;
        for (const GraphEdge &e : g.vertices[v].edges)
            if (g.survives(e.target))
                succ[v].push_back(e.target);
        std::sort(succ[v].begin(), succ[v].end());
        succ[v].erase(std::unique(succ[v].begin(), succ[v].end()), succ[v].end());
    }

    std::vector<std::ptrdiff_t> position(g.vertices.size(), -1);
    std::vector<std::size_t> path{0};
    std::vector<std::size_t> cursor{0};
    position[0] = 0;
    std::size_t steps = 0;
    while (!path.empty()) {
        if (++steps > limits.max_steps)
            throw LimitExceeded("lasso search exceeded " + std::to_string(limits.max_steps) + " steps");
        const std::size_t v = path.back();
        std::size_t &c = cursor.back();
        if (c == succ[v].size()) {
            position[v] = -1;
            path.pop_back();
            cursor.pop_back();
            continue;
        }
        const std::size_t u = succ[v][c++];
        if (position[u] >= 0) {
            const auto j = static_cast<Tick>(position[u]);
            if (!visit(path, j, static_cast<Tick>(path.size()) - j))
                return;
        } else {
            position[u] = static_cast<std::ptrdiff_t>(path.size());
            path.push_back(u);
            cursor.push_back(0);
        }
    }
}

} // namespace

ExtremalCycles extremal_cycles(const ScheduleGraph &graph, const SearchLimits &limits) {
    ExtremalCycles out;
    for_each_lasso(graph, limits, [&](const std::vector<std::size_t> &path, Tick transient, Tick period) {
        const bool first = ++out.lassos_examined == 1;
        if (first || period > out.max_cycle_len) {
            out.max_cycle_len = period;
            out.longest_cycle = {path, transient, period};
        }
        if (first || transient > out.max_transient_len) {
            out.max_transient_len = transient;
            out.longest_transient = {path, transient, period};
        }
        out.max_revisit = std::max(out.max_revisit, transient + period);
        return true;
    });
    return out;
}

BoundCheck verify_bound(const ScheduleGraph &graph, Tick bound, const SearchLimits &limits) {
    BoundCheck out;
    for_each_lasso(graph, limits, [&](const std::vector<std::size_t> &path, Tick transient, Tick period) {
        if (transient + period <= bound)
            return true;
        out.holds = false;
        out.counterexample = Lasso{path, transient, period};
        return false;
    });
    return out;
}

// --------------------------------------------------------------- export

namespace {

std::string join(const std::vector<Tick> &v) {
    std::ostringstream os;
    for (std::size_t i = 0; i < v.size(); ++i)
        os << (i ? "," : "") << v[i];
    return os.str();
}

std::string vertex_label(const GraphVertex &x) {
    std::ostringstream os;
    os << "t=" << x.level << "\\n(" << join(x.state.remaining) << ")|(" << join(x.state.clocks) << ")";
    if (!x.state.suspension.empty())
        os << "\\nsusp(" << join(x.state.suspension) << ")";
    if (!x.state.precedence_gap.empty())
        os << "\\ngap(" << join(x.state.precedence_gap) << ")";
    return os.str();
}

std::string decision_label(const Decision &d) {
    if (d.empty())
        return "idle";
    std::ostringstream os;
    for (std::size_t i = 0; i < d.size(); ++i)
        os << (i ? "+" : "") << "t" << d[i];
    return os.str();
}

} // namespace

std::string export_graph(const ScheduleGraph &graph) {
    std::ostringstream os;
    os << "digraph schedule {\n";
    if (!graph.vertices.empty())
        os << "  node [shape=box, fontname=\"monospace\"];\n";
    for (std::size_t v = 0; v < graph.vertices.size(); ++v) {
        const GraphVertex &x = graph.vertices[v];
        os << "  v" << v << " [label=\"" << vertex_label(x) << "\"";
        if (x.missed)
            os << ", color=red";
        else if (x.pruned || x.dead)
            os << ", color=gray, fontcolor=gray";
        os << "];\n";
    }
    // An edge back to a state first seen at the same or an earlier tick is
    // drawn to a copy of that state (the cycle point seen again), and the
    // copy is linked to the original with a dashed line.
    std::size_t copies = 0;
    for (std::size_t v = 0; v < graph.vertices.size(); ++v) {
        const GraphVertex &x = graph.vertices[v];
        for (const GraphEdge &e : x.edges) {
            const GraphVertex &y = graph.vertices[e.target];
            if (y.level > x.level) {
                os << "  v" << v << " -> v" << e.target << " [label=\"" << decision_label(e.decision) << "\"];\n";
                continue;
            }
            GraphVertex again = y;
            again.level = x.level + 1;
            os << "  cp" << copies << " [label=\"" << vertex_label(again) << "\", style=dashed];\n";
            os << "  v" << v << " -> cp" << copies << " [label=\"" << decision_label(e.decision) << "\"];\n";
            os << "  cp" << copies << " -> v" << e.target << " [style=dashed, dir=none, constraint=false];\n";
            ++copies;
        }
    }
    os << "}\n";
    return os.str();
}

} // namespace schedcycle
