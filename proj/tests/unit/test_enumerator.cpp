#include "fixtures.hpp"

#include "schedcycle/bounds.hpp"
#include "schedcycle/enumerator.hpp"

#include <doctest.h>

using namespace schedcycle;
using namespace fixtures;

namespace {

ScheduleTrace lasso_trace(const ScheduleGraph &g, const Lasso &lasso) {
    ScheduleTrace trace;
    trace.processors = g.system.processors;
    std::vector<std::size_t> walk = lasso.path;
    walk.push_back(lasso.path[static_cast<std::size_t>(lasso.transient)]);
    for (std::size_t k = 0; k + 1 < walk.size(); ++k) {
        for (const GraphEdge &e : g.vertices[walk[k]].edges)
            if (e.target == walk[k + 1]) {
                trace.assignment.push_back(e.decision);
                break;
            }
    }
    return trace;
}

} // namespace

TEST_CASE("schedule graph of the uniprocessor example") {
    ScheduleGraph g = build_graph(sys2());
    CHECK(g.complete);
    CHECK(g.hyperperiod == 4);
    CHECK(g.vertices[0].state == initial_state(sys2()));

    auto cp1 = g.find(SystemState{{2, 1}, {0, 0}, {}, {}});
    auto cp2 = g.find(SystemState{{2, 1}, {1, 1}, {}, {}});
    REQUIRE(cp1);
    REQUIRE(cp2);
    CHECK(g.vertices[*cp1].phase == 0);
    CHECK(g.vertices[*cp2].phase == 1);
    CHECK(g.survives(*cp1));
    CHECK(g.survives(*cp2));
    CHECK(g.has_edge(*cp1, {}, *cp2));

    // every edge is a valid decision leading to the stepped state
    for (const GraphVertex &v : g.vertices)
        for (const GraphEdge &e : v.edges) {
            CHECK_NOTHROW(validate_decision(g.system, v.state, e.decision));
            CHECK(g.vertices[e.target].state == tick(g.system, v.state, e.decision));
        }
}

TEST_CASE("depth-limited graph") {
    ScheduleGraph g = build_graph(sys2(), GraphOptions{8, 1000});
    CHECK(g.complete);
    ScheduleGraph shallow = build_graph(sys2(), GraphOptions{2, 1000});
    CHECK_FALSE(shallow.complete);
    CHECK(shallow.find(SystemState{{2, 1}, {1, 1}, {}, {}}));

    TaskSystem chain{{task(1, 0, 1, 1, 1)}, 1, {}};
    ScheduleGraph c = build_graph(chain, GraphOptions{3, 100});
    REQUIRE(c.vertices.size() == 2);   // the busy state, and the idle branch that misses
    CHECK(c.vertices[0].edges.size() == 2);
    CHECK(c.survivor_count() == 1);

    CHECK_THROWS_AS(build_graph(sys1(), GraphOptions{std::nullopt, 3}), LimitExceeded);
}

TEST_CASE("lookahead pruning") {
    // Idling at 0, 1 and 2 leaves three units due by 5 and 4 with one tick of room.
    SystemState s = initial_state(sys2());
    for (int k = 0; k < 3; ++k)
        s = tick(sys2(), s, {});
    CHECK(lookahead_infeasible(sys2(), s));
    CHECK_FALSE(has_overdue_work(sys2(), s));
    ScheduleGraph g = build_graph(sys2());
    auto v = g.find(s);
    REQUIRE(v);
    CHECK(g.vertices[*v].pruned);

    CHECK_FALSE(lookahead_infeasible(sys2(), initial_state(sys2())));
}

TEST_CASE("pruning never removes a state from which a feasible schedule exists") {
    // Exhaustive check on small systems: for every pruned state, depth-limited
    // brute force over decisions finds no miss-free continuation.
    std::mt19937_64 rng(31);
    int pruned_seen = 0;
    for (int k = 0; k < 60; ++k) {
        TaskSystem s = random_system(rng);
        s.processors = 1;
        ScheduleGraph g;
        try {
            g = build_graph(s, GraphOptions{12, 20000});
        } catch (const LimitExceeded &) {
            continue;
        }
        for (const GraphVertex &v : g.vertices) {
            if (!v.pruned)
                continue;
            ++pruned_seen;
            // deadline-first continuation is optimal on one processor
            SystemState st = v.state;
            bool missed = false;
            for (int t = 0; t < 30 && !missed; ++t) {
                auto ready = eligible_jobs(s, st);
                st = tick(s, st, decide(SchedulerSpec::edf(), s, st, 0, ready));
                missed = has_overdue_work(s, st);
            }
            CHECK(missed);
        }
    }
    CHECK(pruned_seen > 0);
}

TEST_CASE("extremal cycles of the uniprocessor example") {
    ScheduleGraph g = build_graph(sys2());
    ExtremalCycles x = extremal_cycles(g);
    CHECK(x.max_cycle_len == 8);
    CHECK(x.max_transient_len == 4);
    CHECK(verify_bound(g, 8).holds);
    BoundCheck tight = verify_bound(g, 7);
    CHECK_FALSE(tight.holds);
    REQUIRE(tight.counterexample);
    CHECK(tight.counterexample->revisit() > 7);

    // The longest cycle is realized by a memoryless table.
    ScheduleTrace trace = lasso_trace(g, x.longest_cycle);
    SchedulerSpec table = make_adversary_table(sys2(), trace);
    CycleReport r = find_cycle(sys2(), table);
    CHECK(r.feasible);
    CHECK(*r.period_len == 8);
    CHECK(*r.transient_len == x.longest_cycle.transient);
}

TEST_CASE("two tasks that may each finish one tick late") {
    // Residues (1,0) and (0,1) at a hyperperiod boundary both force the late
    // unit to run first, so they merge one tick later: no schedule passes
    // through both, and the longest cycle is 2H, below the 4H product bound.
    const TaskSystem s = lagging_pair();
    ScheduleGraph g = build_graph(s);
    ExtremalCycles x = extremal_cycles(g);
    CHECK(general_product_bound(s) == 16);
    CHECK(x.max_cycle_len == 8);
    CHECK(x.max_revisit <= 12);
    CHECK(verify_bound(g, 16).holds);

    SystemState from10 = tick(s, SystemState{{2, 1}, {0, 0}, {}, {}}, {1});
    SystemState from01 = tick(s, SystemState{{1, 2}, {0, 0}, {}, {}}, {2});
    CHECK(from10 == from01);
}

TEST_CASE("bounds hold on the two-processor example") {
    ScheduleGraph g = build_graph(sys1());
    CHECK(g.complete);
    CHECK(verify_bound(g, 16).holds);
    TaskSystem constrained{{task(1, 0, 1, 2, 2), task(2, 0, 2, 4, 3)}, 1, {}};
    CHECK(verify_bound(build_graph(constrained), hyperperiod(constrained)).holds);
}

TEST_CASE("graph export") {
    ScheduleGraph g = build_graph(sys2());
    std::string dot = export_graph(g);
    CHECK(dot.rfind("digraph schedule {", 0) == 0);
    CHECK(dot.find("style=dashed") != std::string::npos);
    // the initial state seen again at t=4 is drawn as a dashed copy linked back to v0
    CHECK(dot.find("-> v0 [style=dashed") != std::string::npos);

    CHECK(export_graph(ScheduleGraph{}) == "digraph schedule {\n}\n");

    TaskSystem chain{{task(1, 0, 1, 1, 1)}, 1, {}};
    std::string line = export_graph(build_graph(chain, GraphOptions{3, 100}));
    CHECK(line.find("v0 -> cp0 [label=\"t1\"]") != std::string::npos);
    CHECK(export_graph(g) == dot);
}
