#include "doctest.h"

#include "ucircle/sim.hpp"

#include <sstream>

using namespace ucircle;

namespace {

WorldState line_world(int n, double gap = 4.0) {
    WorldState w;
    for (int i = 0; i < n; ++i) {
        RobotState r;
        r.id = static_cast<RobotHandle>(i);
        r.center = {gap * i, 0.0};
        w.robots.push_back(r);
    }
    return w;
}

const Algorithm kStay = [](const Snapshot&) { return Action::stay("idle"); };

// Moves every robot one unit up until it reaches y = 3.
const Algorithm kClimb = [](const Snapshot& s) {
    if (s.self.y >= 3.0 - 1e-12) return Action::stay("top");
    return Action::move_to({s.self.x, s.self.y + 1.0}, "up");
};

bool all_at_top(const WorldState& w) {
    for (const auto& r : w.robots)
        if (r.center.y < 3.0 - 1e-12) return false;
    return true;
}

}  // namespace

TEST_CASE("snapshot visibility and frames") {
    WorldState w = line_world(5);
    CHECK(take_snapshot(w, 0).others.size() == 4);

    w.robots[0].vis_radius = 2.0;
    w.robots[1].center = {2.5, 0.0};
    CHECK(take_snapshot(w, 0).others.empty());

    WorldState two;
    RobotState me, other;
    me.id = 0;
    me.frame = FrameKind::y_only;
    me.chirality = Chirality::left;
    other.id = 1;
    other.center = {3, 4};
    two.robots = {me, other};
    const Snapshot s = take_snapshot(two, 0);
    REQUIRE(s.others.size() == 1);
    CHECK(s.others[0] == Point{-3, 4});
    CHECK_FALSE(s.cir_center.has_value());
    // Flipping twice is the identity.
    CHECK(to_world(me, to_local(me, {3, 4})) == Point{3, 4});

    CHECK_THROWS_AS(take_snapshot(two, 7), std::invalid_argument);
}

TEST_CASE("activation sets") {
    const WorldState w = line_world(6);
    CHECK(next_activation({ScheduleKind::fsync, 1, 1}, w, 0).size() == 6);
    for (auto kind : {ScheduleKind::ssync, ScheduleKind::async}) {
        for (std::uint64_t seed : {1u, 2u, 99u}) {
            const Schedule s{kind, seed, 4};
            std::vector<long> last(6, -1);
            for (long round = 0; round < 10000; ++round) {
                const auto act = next_activation(s, w, round);
                REQUIRE_FALSE(act.empty());
                for (auto h : act) last[h] = round;
                // Every robot appeared within the last fairness_bound rounds.
                if (round >= s.fairness_bound - 1)
                    for (long l : last) REQUIRE(round - l < s.fairness_bound);
                CHECK(act == next_activation(s, w, round));
            }
        }
    }
}

TEST_CASE("one synchronous cycle") {
    const WorldState w = line_world(3);
    const std::vector<RobotHandle> all = {0, 1, 2};

    const CycleResult idle = execute_cycle(w, all, kStay, 0);
    CHECK_FALSE(idle.any_move);
    CHECK(idle.world.centers() == w.centers());
    CHECK(idle.world.clock > w.clock);

    WorldState single = line_world(1);
    const CycleResult m = execute_cycle(single, std::vector<RobotHandle>{0},
                                        [](const Snapshot&) { return Action::move_to({3, 0}); }, 0);
    CHECK(m.world.robots[0].center == Point{3, 0});
    CHECK(m.world.clock == doctest::Approx(3.0));
    CHECK(m.any_move);

    // Two robots swap places along a line.
    WorldState swap = line_world(2);
    const Algorithm crossing = [](const Snapshot& s) {
        return Action::move_to({s.self.x == 0.0 ? 4.0 : 0.0, 0.0});
    };
    CHECK_THROWS_AS(execute_cycle(swap, std::vector<RobotHandle>{0, 1}, crossing, 0), SimulationFault);

    const Algorithm bad = [](const Snapshot&) { return Action::move_to({NAN, 0}); };
    try {
        execute_cycle(single, std::vector<RobotHandle>{0}, bad, 0);
        FAIL("expected a fault");
    } catch (const SimulationFault& f) {
        CHECK(f.kind() == SimulationFault::Kind::invalid_action);
    }
}

TEST_CASE("events follow wait look compute move per robot") {
    const WorldState w = line_world(3);
    for (auto kind : {ScheduleKind::ssync, ScheduleKind::async}) {
        const Trace t = run(w, kClimb, {kind, 5, 3}, all_at_top, 100);
        CHECK(t.outcome == Outcome::converged);
        std::vector<int> stage(3, 3);
        for (const auto& e : t.events) {
            const int p = static_cast<int>(e.phase);
            if (p == 0) {
                CHECK((stage[e.robot] == 3 || stage[e.robot] == 2));
            } else {
                CHECK(p == stage[e.robot] + 1);
            }
            stage[e.robot] = p;
        }
    }
}

TEST_CASE("run outcomes") {
    WorldState done = line_world(3);
    for (auto& r : done.robots) r.center.y = 3.0;
    const Trace t0 = run(done, kClimb, {ScheduleKind::ssync, 1, 3}, all_at_top, 10);
    CHECK(t0.outcome == Outcome::converged);
    CHECK(t0.events.empty());

    const Trace t1 = run(line_world(3), kClimb, {ScheduleKind::fsync, 1, 1}, all_at_top, 1);
    CHECK(t1.outcome == Outcome::budget_exhausted);
    CHECK(t1.cycles_used == 1);

    const Trace t2 = run(line_world(3), kStay, {ScheduleKind::ssync, 1, 3}, all_at_top, 100);
    CHECK(t2.outcome == Outcome::stalled);
}

TEST_CASE("asynchronous runs observe robots mid-move and stay safe") {
    const Trace t = run(line_world(4, 2.5), kClimb, {ScheduleKind::async, 3, 4}, all_at_top, 200);
    CHECK(t.outcome == Outcome::converged);
    CHECK(t.min_separation >= 2.0 - 1e-9);
}

TEST_CASE("same seed gives byte-identical traces") {
    for (auto kind : {ScheduleKind::fsync, ScheduleKind::ssync, ScheduleKind::async}) {
        const Trace a = run(line_world(5), kClimb, {kind, 42, 5}, all_at_top, 100);
        const Trace b = run(line_world(5), kClimb, {kind, 42, 5}, all_at_top, 100);
        CHECK(serialize_trace(a) == serialize_trace(b));
    }
}

TEST_CASE("trace lines keep field order and full precision") {
    TraceEvent e{0.1, 2, 3, Phase::move, {1.0 / 3.0, -2}, Point{4, 5}, "up"};
    CHECK(to_jsonl(e) ==
          "{\"clock\":0.10000000000000001,\"cycle\":2,\"robot\":3,\"phase\":\"move\",\"x\":0.33333333333333331,"
          "\"y\":-2,\"dest_x\":4,\"dest_y\":5,\"tag\":\"up\"}");
    TraceEvent w{1, 0, 0, Phase::wait, {0, 0}, std::nullopt, ""};
    CHECK(to_jsonl(w) == "{\"clock\":1,\"cycle\":0,\"robot\":0,\"phase\":\"wait\",\"x\":0,\"y\":0}");

    const Trace t = run(line_world(3), kClimb, {ScheduleKind::async, 9, 3}, all_at_top, 100);
    std::istringstream in(serialize_trace(t));
    const auto back = parse_trace(in);
    REQUIRE(back.size() == t.events.size());
    for (std::size_t i = 0; i < back.size(); ++i) CHECK(to_jsonl(back[i]) == to_jsonl(t.events[i]));

    std::istringstream junk("{\"clock\":1}\n");
    CHECK_THROWS(parse_trace(junk));
}

TEST_CASE("compute is a pure function of the snapshot") {
    const WorldState w = line_world(4);
    const Snapshot s = take_snapshot(w, 2);
    const Action a = kClimb(s), b = kClimb(s);
    CHECK(a.destination == b.destination);
    CHECK(a.tag == b.tag);
}
