#pragma once

// Look-compute-move engine: world state, per-robot snapshots in local frames,
// FSYNC/SSYNC/ASYNC schedulers, rigid motion at unit speed, continuous
// collision monitoring and trace emission.

#include "ucircle/geometry.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ucircle {

inline constexpr double kInfiniteVisibility = std::numeric_limits<double>::infinity();

enum class Chirality { right, left };

// y_only: origin at the observer, shared Y axis, X sign private.
// full_axes: common origin (the target circle center) and common axes.
enum class FrameKind { y_only, full_axes };

using RobotHandle = std::size_t;

struct RobotState {
    RobotHandle id = 0;
    Point center;
    double body_radius = kBodyRadius;
    double vis_radius = kInfiniteVisibility;
    Chirality chirality = Chirality::right;
    FrameKind frame = FrameKind::full_axes;
};

/// Algorithm inputs every robot is given up front.
struct SceneParams {
    int n = 0;
    double a = 0.0;    // minimum adjacent distance (unlimited-visibility algorithm)
    double rad = 0.0;  // radius of the circle to form (limited-visibility algorithm)
};

struct WorldState {
    std::vector<RobotState> robots;
    double clock = 0.0;
    SceneParams params;

    const RobotState& robot(RobotHandle h) const;
    std::vector<Point> centers() const;
};

/// What one robot perceives in its Look phase, expressed in its own frame.
/// Carries no robot handles.
struct Snapshot {
    Point self;
    std::vector<Point> others;
    double vis_radius = kInfiniteVisibility;
    SceneParams params;
    std::optional<Point> cir_center;  // set for full_axes frames only
};

struct Action {
    std::optional<Point> destination;  // local frame; empty means stay
    std::string tag;

    static Action stay(std::string tag = {}) { return {std::nullopt, std::move(tag)}; }
    static Action move_to(Point dest, std::string tag = {}) { return {dest, std::move(tag)}; }
    bool is_stay() const { return !destination.has_value(); }
};

using Algorithm = std::function<Action(const Snapshot&)>;

enum class ScheduleKind { fsync, ssync, async };

struct Schedule {
    ScheduleKind kind = ScheduleKind::fsync;
    std::uint64_t seed = 0;
    int fairness_bound = 1;  // max consecutive rounds a robot may stay inactive
};

enum class Phase { wait, look, compute, move };

struct TraceEvent {
    double clock = 0.0;
    long cycle = 0;
    RobotHandle robot = 0;
    Phase phase = Phase::wait;
    Point position;  // world frame
    std::optional<Point> destination;
    std::string tag;
};

enum class Outcome { converged, budget_exhausted, fault, stalled };

class SimulationFault : public std::runtime_error {
public:
    enum class Kind { collision, invalid_action };
    SimulationFault(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

using TerminationPredicate = std::function<bool(const WorldState&)>;

struct Trace {
    WorldState initial;
    WorldState final_world;
    std::vector<TraceEvent> events;
    Outcome outcome = Outcome::budget_exhausted;
    long cycles_used = 0;
    double min_separation = std::numeric_limits<double>::infinity();
    std::string diagnostic;
};

// Frame conversions for one observer.
Point to_local(const RobotState& observer, Point world);
Point to_world(const RobotState& observer, Point local);

/// Throws std::invalid_argument for an unknown handle.
Snapshot take_snapshot(const WorldState& world, RobotHandle observer);

/// Pure function of (schedule, world size, round).
std::vector<RobotHandle> next_activation(const Schedule& schedule, const WorldState& world, long round);

struct CycleResult {
    WorldState world;
    std::vector<TraceEvent> events;
    double min_separation = std::numeric_limits<double>::infinity();
    bool any_move = false;
};

/// One atomic round: every active robot looks at the same instant, computes,
/// and all moves run concurrently to completion. Throws SimulationFault.
CycleResult execute_cycle(const WorldState& world, std::span<const RobotHandle> active,
                          const Algorithm& algorithm, long cycle = 0);

/// Runs until `done` holds, the budget is spent, a fault is raised, or the
/// world reaches a fixed point with every robot choosing to stay.
Trace run(const WorldState& world, const Algorithm& algorithm, const Schedule& schedule,
          const TerminationPredicate& done, long max_cycles);

std::string_view phase_name(Phase p);
std::string_view outcome_name(Outcome o);

/// One JSON object per line, fixed field order, reals with 17 significant digits.
std::string to_jsonl(const TraceEvent& e);
void write_trace(std::ostream& out, const Trace& trace);
std::string serialize_trace(const Trace& trace);

/// Strict reader for the line format produced by to_jsonl.
std::vector<TraceEvent> parse_trace(std::istream& in);

}  // namespace ucircle
