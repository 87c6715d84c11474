#include "fixtures.hpp"

#include "schedcycle/bounds.hpp"

#include <doctest.h>

using namespace schedcycle;
using namespace fixtures;

TEST_CASE("sn start point") {
    BoundValue s = sn_bound(offsets_a(), {1, 2});
    REQUIRE(s.applicable());
    CHECK(*s.value == 8);
    CHECK(*bounds_report(offsets_a(), PriorityOrder{1, 2}).sn_interval_end.value == 16);

    TaskSystem sync{{task(1, 0, 1, 4, 4), task(2, 0, 1, 6, 6)}, 1, {}};
    CHECK(*sn_bound(sync, {1, 2}).value == 0);
    CHECK(*bounds_report(sync, PriorityOrder{1, 2}).sn_interval_end.value == 12);

    CHECK_FALSE(sn_bound(offsets_b(), {1, 2}).applicable());
    CHECK(sn_bound(offsets_b(), {1, 2}).note.find("D > T") != std::string::npos);
    CHECK_THROWS_AS(sn_bound(offsets_a(), {1, 1}), ConfigError);
}

TEST_CASE("sn start point on a hand-evaluated system") {
    // tau1 (O=3, T=5) above tau2 (O=1, T=4):
    //   S1 = 3; S2 = max(1, 1 + ceil((3 - 1) / 4) * 4) = 5.
    TaskSystem s{{task(1, 3, 2, 5, 5), task(2, 1, 1, 4, 4)}, 1, {}};
    CHECK(*sn_bound(s, {1, 2}).value == 5);

    // From S2 on, a fixed-priority schedule repeats with period H.
    const Tick h = hyperperiod(s);
    Simulation sim(s);
    const SchedulerSpec fp = SchedulerSpec::fixed_priority(PriorityRule::explicit_list);
    TaskSystem ranked = s;
    ranked.tasks[0].priority = 1;
    ranked.tasks[1].priority = 2;
    std::vector<SystemState> states;
    for (Tick t = 0; t <= 5 + h; ++t) {
        states.push_back(sim.state());
        sim.advance(decide(fp, ranked, sim.state(), t, sim.eligible()));
    }
    CHECK(sim.misses().empty());
    CHECK(states[5] == states[static_cast<std::size_t>(5 + h)]);
}

TEST_CASE("sn hat start point") {
    BoundValue a = sn_hat_bound(offsets_a(), {1, 2});
    CHECK(*a.value == 16);
    CHECK(*bounds_report(offsets_a(), PriorityOrder{1, 2}).sn_hat_interval_end.value == 24);

    // S1 = 1; S2 = max(0, 0 + ceil(1/8) * 8) + lcm(12, 8) = 8 + 24.
    BoundValue b = sn_hat_bound(offsets_b(), {1, 2});
    CHECK(*b.value == 32);
    CHECK(*bounds_report(offsets_b(), PriorityOrder{1, 2}).sn_hat_interval_end.value == 56);

    TaskSystem single{{task(1, 0, 1, 5, 5)}, 1, {}};
    CHECK(*sn_hat_bound(single, {1}).value == 0);
    CHECK(*bounds_report(single, PriorityOrder{1}).sn_hat_interval_end.value == 5);
}

TEST_CASE("general product bound") {
    CHECK(general_product_bound(sys1()) == 16);
    CHECK(general_product_bound(offsets_a()) == 8);
    CHECK(general_product_bound(offsets_b()) == 48);
    CHECK(general_product_bound(sys2()) == 8);
    CHECK(general_product_bound(lagging_pair()) == 16);
    TaskSystem constrained{{task(1, 0, 1, 4, 3), task(2, 0, 2, 6, 6)}, 1, {}};
    CHECK(general_product_bound(constrained) == 12);
}

TEST_CASE("sync product bound") {
    CHECK(*sync_product_bound(sys2()).value == 8);
    CHECK(*sync_product_bound(lagging_pair()).value == 16);
    CHECK_FALSE(sync_product_bound(offsets_a()).applicable());

    // The general bound equals the synchronous bound of the synchronized system.
    std::mt19937_64 rng(11);
    for (int k = 0; k < 300; ++k) {
        TaskSystem s = random_system(rng);
        CHECK(general_product_bound(s) == *sync_product_bound(synchronize(s)).value);
    }
}

TEST_CASE("offset plus two hyperperiods") {
    CHECK(leung_bound(sys1()) == 8);
    CHECK(leung_bound(offsets_a()) == 17);
    CHECK(leung_bound(sys2()) == 8);
}

TEST_CASE("bounds report") {
    BoundsReport a = bounds_report(offsets_a(), PriorityOrder{1, 2});
    CHECK(a.hyperperiod == 8);
    CHECK(a.general_product_end == 8);
    CHECK(*a.sn_interval_end.value == 16);
    CHECK(*a.sn_hat_interval_end.value == 24);
    CHECK(*a.leung.value == 17);
    CHECK(a.best == 8);
    CHECK(a.best_source == "general_product");

    BoundsReport b = bounds_report(offsets_b(), PriorityOrder{1, 2});
    CHECK(b.general_product_end == 48);
    CHECK_FALSE(b.sn.applicable());
    CHECK(b.best == std::min<Tick>(48, *b.sn_hat_interval_end.value));

    BoundsReport c = bounds_report(sys1());
    CHECK(c.general_product_end == 16);
    CHECK(c.sync_product_end == 16);
    CHECK_FALSE(c.sn.applicable());
    CHECK_FALSE(c.sn_hat.applicable());
    CHECK_FALSE(c.leung.applicable());
    CHECK(c.best == 16);
    CHECK(c.applicability_notes.size() == 5);

    // best is the minimum over the applicable candidates
    std::mt19937_64 rng(3);
    for (int k = 0; k < 200; ++k) {
        TaskSystem s = random_system(rng);
        PriorityOrder order;
        for (const Task &t : s.tasks)
            order.push_back(t.id);
        BoundsReport r = bounds_report(s, order);
        Tick lo = std::min(r.general_product_end, r.sync_product_end);
        for (const BoundValue *v : {&r.sn_interval_end, &r.sn_hat_interval_end, &r.leung})
            if (v->applicable())
                lo = std::min(lo, *v->value);
        CHECK(r.best == lo);
    }
}
