#include "fixtures.hpp"

#include "schedcycle/bounds.hpp"
#include "schedcycle/cycle_detect.hpp"

#include <doctest.h>

using namespace schedcycle;
using namespace fixtures;

TEST_CASE("global EDF on the two-processor example") {
    CycleRun run = run_cycle_detection(sys1(), SchedulerSpec::edf());
    const CycleReport &r = run.report;
    CHECK(r.verdict == Verdict::cycle_found);
    CHECK(r.feasible);
    CHECK(*r.transient_len == 8);
    CHECK(*r.period_len == 4);
    CHECK(!r.first_miss);
    CHECK(r.bound_used == 20);
    CHECK(*r.aligned_transient == 8);
    CHECK(*r.aligned_period == 4);
    // the trace runs one more period past the revisit
    CHECK(run.trace.horizon() == 16);

    // residues at H, 2H, 3H
    Simulation sim = replay(sys1(), run.trace.assignment);
    std::vector<std::vector<Tick>> residues;
    Simulation step(sys1());
    for (Tick t = 0; t < 12; ++t) {
        step.advance(run.trace.assignment[static_cast<std::size_t>(t)]);
        if (step.now() % 4 == 0)
            residues.push_back(pre_state(sys1(), step.state()).remaining);
    }
    CHECK(residues == std::vector<std::vector<Tick>>{{0, 0, 1}, {0, 0, 2}, {0, 0, 2}});
}

TEST_CASE("LRPTF has no transient phase") {
    CycleReport r = find_cycle(sys1(), SchedulerSpec::lrptf());
    CHECK(r.feasible);
    CHECK(*r.transient_len == 0);
    CHECK(*r.period_len == 4);
}

TEST_CASE("deadline monotonic misses") {
    CycleReport r = find_cycle(sys1(), SchedulerSpec::fixed_priority(PriorityRule::deadline_monotonic));
    CHECK(r.verdict == Verdict::miss_found);
    CHECK_FALSE(r.feasible);
    REQUIRE(r.first_miss);
    CHECK(*r.first_miss == JobMiss{3, 1, 11});

    CycleOptions stop;
    stop.stop_on_miss = true;
    CycleRun early = run_cycle_detection(sys1(), SchedulerSpec::fixed_priority(PriorityRule::deadline_monotonic), stop);
    CHECK(early.report.verdict == Verdict::miss_found);
    CHECK(early.trace.horizon() == 11);
}

TEST_CASE("deadline monotonic on the uniprocessor example") {
    CycleReport r = find_cycle(sys2(), SchedulerSpec::fixed_priority(PriorityRule::deadline_monotonic));
    CHECK(r.feasible);
    CHECK(*r.transient_len == 0);
    CHECK(*r.period_len == 4);
}

TEST_CASE("a short horizon is exhausted") {
    CycleReport r = find_cycle(sys1(), SchedulerSpec::edf(), 5);
    CHECK(r.verdict == Verdict::horizon_exhausted);
    CHECK_FALSE(r.feasible);
    CHECK(!r.period_len);
}

TEST_CASE("single task missing every deadline") {
    TaskSystem s{{task(1, 0, 2, 4, 1)}, 1, {}};
    CycleReport r = find_cycle(s, SchedulerSpec::edf());
    CHECK(r.verdict == Verdict::miss_found);
    CHECK(*r.first_miss == JobMiss{1, 0, 1});
}

TEST_CASE("state keys") {
    CycleRun run = run_cycle_detection(sys1(), SchedulerSpec::edf());
    Simulation sim(sys1());
    std::string k8, k12;
    for (Tick t = 0; t < 12; ++t) {
        sim.advance(run.trace.assignment[static_cast<std::size_t>(t)]);
        if (sim.now() == 8)
            k8 = canonical_state_key(sim.state());
    }
    k12 = canonical_state_key(sim.state());
    CHECK(k8 == k12);

    SystemState a{{1, 2}, {0, 1}, {0, 0}, {}};
    SystemState b = a;
    CHECK(canonical_state_key(a) == canonical_state_key(b));
    b.suspension[1] = 1;
    CHECK(canonical_state_key(a) != canonical_state_key(b));
    SystemState c{{1, 2}, {0, 1}, {}, {0, 0}};
    CHECK(canonical_state_key(a) != canonical_state_key(c));

    CHECK(decode_state_key(canonical_state_key(b)) == b);
    CHECK(from_hex(to_hex(canonical_state_key(b))) == canonical_state_key(b));
    CHECK_THROWS_AS(decode_state_key("R"), InputError);
    CHECK_THROWS_AS(from_hex("abc"), InputError);
}

TEST_CASE("steady idle accounting") {
    CycleRun edf = run_cycle_detection(sys1(), SchedulerSpec::edf());
    CHECK(steady_idle_count(sys1(), edf.trace, edf.report) == 1);
    CycleRun lr = run_cycle_detection(sys1(), SchedulerSpec::lrptf());
    CHECK(steady_idle_count(sys1(), lr.trace, lr.report) == 1);

    TaskSystem full{{task(1, 0, 1, 2, 2), task(2, 0, 2, 4, 4)}, 1, {}};
    CycleRun f = run_cycle_detection(full, SchedulerSpec::edf());
    CHECK(steady_idle_count(full, f.trace, f.report) == 0);

    CycleRun dm = run_cycle_detection(sys1(), SchedulerSpec::fixed_priority(PriorityRule::deadline_monotonic));
    CHECK_THROWS_AS(steady_idle_count(sys1(), dm.trace, dm.report), InvariantViolation);
}

TEST_CASE("cycle detection agrees with the job-level reference simulator") {
    std::mt19937_64 rng(23);
    int compared = 0;
    for (int k = 0; k < 400; ++k) {
        TaskSystem s = random_system(rng);
        const Tick horizon = default_horizon(s);
        struct Case {
            SchedulerSpec spec;
            std::string policy;
        };
        std::vector<TaskId> ranking = priority_ranking(SchedulerSpec::fixed_priority(PriorityRule::explicit_list), s);
        for (const Case &c : {Case{SchedulerSpec::edf(), "edf"}, Case{SchedulerSpec::lrptf(), "lrptf"},
                              Case{SchedulerSpec::fixed_priority(PriorityRule::explicit_list), "fixed"}}) {
            CycleOptions opts;
            opts.stop_on_miss = true;
            CycleRun run = run_cycle_detection(s, c.spec, opts);
            ReferenceRun ref = reference_simulate(s, c.policy, ranking, horizon);
            if (ref.missed) {
                CHECK(run.report.verdict == Verdict::miss_found);
                continue;
            }
            REQUIRE(ref.period);
            CHECK(run.report.verdict == Verdict::cycle_found);
            CHECK(run.report.transient_len == ref.transient);
            CHECK(run.report.period_len == ref.period);
            for (std::size_t t = 0; t < ref.assignment.size(); ++t)
                CHECK(run.trace.assignment[t] == ref.assignment[t]);
            ++compared;
        }
    }
    CHECK(compared > 300);
}

TEST_CASE("feasible cycles respect the product bound and align with hyperperiods") {
    std::mt19937_64 rng(29);
    for (int k = 0; k < 300; ++k) {
        TaskSystem s = random_system(rng);
        for (const SchedulerSpec &spec : builtin_schedulers()) {
            CycleReport r = find_cycle(s, spec);
            if (!r.feasible)
                continue;
            CHECK(*r.transient_len + *r.period_len <= r.bound_used);
            CHECK(*r.transient_len + *r.period_len <= general_product_bound(s));
            CHECK(*r.period_len % hyperperiod(s) == 0);
        }
    }
}
