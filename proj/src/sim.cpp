#include "ucircle/sim.hpp"

#include "ucircle/kernels.hpp"

#include "json.hpp"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <ostream>
#include <queue>
#include <sstream>

namespace ucircle {

namespace {

constexpr double kSeparationFloor = 2.0 * kBodyRadius - kEps;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t mix(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t salt) {
    return splitmix64(splitmix64(splitmix64(seed ^ salt) + a) + b);
}

// Uniform in [0, 1) from the top 53 bits; platform independent.
double unit_real(std::uint64_t h) { return static_cast<double>(h >> 11) * 0x1.0p-53; }

enum Salt : std::uint64_t {
    kSaltPick = 0x51,
    kSaltPhase = 0x52,
    kSaltFallback = 0x53,
    kSaltLookOffset = 0x54,
    kSaltComputeDelay = 0x55,
};

void check_separation(std::span<const MotionSegment> motions, std::span<const RobotHandle> ids,
                      double& running_min) {
    const kernels::PairMinimum m = kernels::min_pairwise_separation(motions);
    running_min = std::min(running_min, m.distance);
    if (m.distance < kSeparationFloor) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "collision: robots " << ids[m.first] << " and " << ids[m.second]
            << " reach center distance " << m.distance;
        throw SimulationFault(SimulationFault::Kind::collision, msg.str());
    }
}

Point checked_world_destination(const RobotState& r, const Action& action) {
    const Point dest = to_world(r, *action.destination);
    if (!is_finite(dest)) {
        throw SimulationFault(SimulationFault::Kind::invalid_action,
                              "robot " + std::to_string(r.id) + " produced a non-finite destination");
    }
    return dest;
}

// Moves shorter than this are treated as staying put.
constexpr double kMinMove = 1e-12;

}  // namespace

const RobotState& WorldState::robot(RobotHandle h) const {
    auto it = std::find_if(robots.begin(), robots.end(), [h](const RobotState& r) { return r.id == h; });
    if (it == robots.end()) throw std::invalid_argument("unknown robot handle " + std::to_string(h));
    return *it;
}

std::vector<Point> WorldState::centers() const {
    std::vector<Point> out;
    out.reserve(robots.size());
    for (const auto& r : robots) out.push_back(r.center);
    return out;
}

Point to_local(const RobotState& observer, Point world) {
    if (observer.frame == FrameKind::full_axes) return world;
    const Point rel = world - observer.center;
    const double sign = observer.chirality == Chirality::right ? 1.0 : -1.0;
    return {sign * rel.x, rel.y};
}

Point to_world(const RobotState& observer, Point local) {
    if (observer.frame == FrameKind::full_axes) return local;
    const double sign = observer.chirality == Chirality::right ? 1.0 : -1.0;
    return observer.center + Point{sign * local.x, local.y};
}

Snapshot take_snapshot(const WorldState& world, RobotHandle observer) {
    const RobotState& me = world.robot(observer);
    Snapshot snap;
    snap.self = to_local(me, me.center);
    snap.vis_radius = me.vis_radius;
    snap.params = world.params;
    if (me.frame == FrameKind::full_axes) snap.cir_center = Point{0.0, 0.0};
    for (const auto& other : world.robots) {
        if (other.id == me.id) continue;
        if (distance(other.center, me.center) <= me.vis_radius) snap.others.push_back(to_local(me, other.center));
    }
    return snap;
}

std::vector<RobotHandle> next_activation(const Schedule& schedule, const WorldState& world, long round) {
    std::vector<RobotHandle> out;
    const std::size_t n = world.robots.size();
    if (n == 0) return out;
    if (schedule.kind == ScheduleKind::fsync) {
        for (const auto& r : world.robots) out.push_back(r.id);
        return out;
    }
    const auto fair = static_cast<std::uint64_t>(std::max(1, schedule.fairness_bound));
    const double p = schedule.kind == ScheduleKind::ssync ? 0.5 : 0.3;
    const auto ur = static_cast<std::uint64_t>(round);
    for (std::size_t i = 0; i < n; ++i) {
        const bool picked = unit_real(mix(schedule.seed, ur, i, kSaltPick)) < p;
        // Each robot owns one residue class mod the fairness bound, so any
        // window of `fair` consecutive rounds activates it at least once.
        const bool forced = mix(schedule.seed, i, 0, kSaltPhase) % fair == ur % fair;
        if (picked || forced) out.push_back(world.robots[i].id);
    }
    if (out.empty()) out.push_back(world.robots[mix(schedule.seed, ur, 0, kSaltFallback) % n].id);
    return out;
}

CycleResult execute_cycle(const WorldState& world, std::span<const RobotHandle> active,
                          const Algorithm& algorithm, long cycle) {
    CycleResult res;
    res.world = world;
    const double t = world.clock;
    std::vector<Point> dest = world.centers();

    for (RobotHandle h : active) {
        const RobotState& r = world.robot(h);
        const Action action = algorithm(take_snapshot(world, h));
        res.events.push_back({t, cycle, h, Phase::wait, r.center, std::nullopt, {}});
        res.events.push_back({t, cycle, h, Phase::look, r.center, std::nullopt, {}});
        std::optional<Point> wd;
        if (!action.is_stay()) {
            const Point d = checked_world_destination(r, action);
            if (distance(d, r.center) > kMinMove) wd = d;
        }
        res.events.push_back({t, cycle, h, Phase::compute, r.center, wd, action.tag});
        if (wd) {
            res.events.push_back({t, cycle, h, Phase::move, r.center, wd, action.tag});
            const auto idx = static_cast<std::size_t>(&r - world.robots.data());
            dest[idx] = *wd;
            res.any_move = true;
        }
    }

    // Unit speed: movers finish at different instants, so the round is split
    // at every arrival and each piece is checked with linear relative motion.
    std::vector<MotionSegment> full;
    std::vector<RobotHandle> ids;
    std::vector<double> cuts{t};
    double longest = 0.0;
    for (std::size_t i = 0; i < world.robots.size(); ++i) {
        const double len = distance(world.robots[i].center, dest[i]);
        longest = std::max(longest, len);
        full.push_back({world.robots[i].center, dest[i], t, t + len});
        ids.push_back(world.robots[i].id);
        if (len > 0.0) cuts.push_back(t + len);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    if (cuts.size() == 1) cuts.push_back(t);
    for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
        std::vector<MotionSegment> piece;
        piece.reserve(full.size());
        for (const auto& m : full) piece.push_back({m.position_at(cuts[c]), m.position_at(cuts[c + 1]), cuts[c], cuts[c + 1]});
        check_separation(piece, ids, res.min_separation);
    }

    for (std::size_t i = 0; i < world.robots.size(); ++i) res.world.robots[i].center = dest[i];
    res.world.clock = t + std::max(1.0, longest);
    return res;
}

namespace {

class AsyncEngine {
public:
    AsyncEngine(const WorldState& world, const Algorithm& algorithm, const Schedule& schedule, Trace& trace)
        : world_(world), algorithm_(algorithm), schedule_(schedule), trace_(trace),
          state_(world.robots.size()) {
        for (std::size_t i = 0; i < world.robots.size(); ++i) state_[i].pos = world.robots[i].center;
        now_ = world.clock;
    }

    // Returns true when the run ended (converged or stalled).
    bool run_round(long round, const TerminationPredicate& done) {
        const double t_round = base_ + static_cast<double>(round);
        if (quiet() && done(snapshot_world(now_))) {
            trace_.outcome = Outcome::converged;
            return true;
        }
        for (RobotHandle h : next_activation(schedule_, world_, round)) {
            const std::size_t i = index_of(h);
            if (state_[i].busy) continue;
            state_[i].busy = true;
            const auto ur = static_cast<std::uint64_t>(round);
            const double offset = 0.999 * unit_real(mix(schedule_.seed, ur, i, kSaltLookOffset));
            trace_.events.push_back({t_round, round, h, Phase::wait, position_at(i, t_round), std::nullopt, {}});
            queue_.push({t_round + offset, kLook, i, round});
        }
        while (!queue_.empty() && queue_.top().t < t_round + 1.0) {
            const Pending ev = queue_.top();
            queue_.pop();
            advance(ev.t);
            handle(ev);
        }
        advance(t_round + 1.0);
        if (quiet() && done(snapshot_world(now_))) {
            trace_.outcome = Outcome::converged;
            return true;
        }
        if (quiet() && std::all_of(state_.begin(), state_.end(), [](const RobotRun& s) { return s.stayed; })) {
            trace_.outcome = Outcome::stalled;
            return true;
        }
        return false;
    }

    WorldState snapshot_world(double t) const {
        WorldState w = world_;
        w.clock = t;
        for (std::size_t i = 0; i < state_.size(); ++i) w.robots[i].center = position_at(i, t);
        return w;
    }

    double now() const { return now_; }
    double min_separation() const { return min_sep_; }

private:
    enum Kind { kMoveEnd = 0, kMoveStart = 1, kLook = 2 };
    struct Pending {
        double t;
        Kind kind;
        std::size_t robot;
        long cycle;
        bool operator>(const Pending& o) const {
            if (t != o.t) return t > o.t;
            if (kind != o.kind) return kind > o.kind;
            return robot > o.robot;
        }
    };
    struct RobotRun {
        Point pos;
        bool busy = false;
        bool moving = false;
        bool stayed = false;
        MotionSegment seg;
        Point pending_dest;
        std::string pending_tag;
    };

    std::size_t index_of(RobotHandle h) const {
        for (std::size_t i = 0; i < world_.robots.size(); ++i)
            if (world_.robots[i].id == h) return i;
        throw std::invalid_argument("unknown robot handle");
    }

    Point position_at(std::size_t i, double t) const {
        return state_[i].moving ? state_[i].seg.position_at(t) : state_[i].pos;
    }

    bool quiet() const {
        return pending_moves_ == 0 &&
               std::none_of(state_.begin(), state_.end(), [](const RobotRun& s) { return s.moving; });
    }

    void advance(double t) {
        if (t <= now_) return;
        std::vector<MotionSegment> motions;
        std::vector<RobotHandle> ids;
        for (std::size_t i = 0; i < state_.size(); ++i) {
            motions.push_back({position_at(i, now_), position_at(i, t), now_, t});
            ids.push_back(world_.robots[i].id);
        }
        check_separation(motions, ids, min_sep_);
        now_ = t;
    }

    void reset_stays() {
        for (auto& s : state_) s.stayed = false;
    }

    void handle(const Pending& ev) {
        RobotRun& s = state_[ev.robot];
        const RobotHandle h = world_.robots[ev.robot].id;
        switch (ev.kind) {
            case kLook: {
                const WorldState view = snapshot_world(ev.t);
                const RobotState& me = view.robots[ev.robot];
                const Action action = algorithm_(take_snapshot(view, h));
                trace_.events.push_back({ev.t, ev.cycle, h, Phase::look, me.center, std::nullopt, {}});
                std::optional<Point> wd;
                if (!action.is_stay()) {
                    const Point d = checked_world_destination(me, action);
                    if (distance(d, me.center) > kMinMove) wd = d;
                }
                trace_.events.push_back({ev.t, ev.cycle, h, Phase::compute, me.center, wd, action.tag});
                if (!wd) {
                    s.busy = false;
                    s.stayed = true;
                    return;
                }
                s.pending_dest = *wd;
                s.pending_tag = action.tag;
                ++pending_moves_;
                const double delay =
                    unit_real(mix(schedule_.seed, static_cast<std::uint64_t>(ev.cycle), ev.robot, kSaltComputeDelay));
                queue_.push({ev.t + delay, kMoveStart, ev.robot, ev.cycle});
                return;
            }
            case kMoveStart: {
                --pending_moves_;
                const double len = distance(s.pos, s.pending_dest);
                trace_.events.push_back({ev.t, ev.cycle, h, Phase::move, s.pos, s.pending_dest, s.pending_tag});
                s.seg = {s.pos, s.pending_dest, ev.t, ev.t + len};
                s.moving = true;
                reset_stays();
                queue_.push({ev.t + len, kMoveEnd, ev.robot, ev.cycle});
                return;
            }
            case kMoveEnd: {
                s.pos = s.seg.end;
                s.moving = false;
                s.busy = false;
                s.pending_tag.clear();
                reset_stays();
                return;
            }
        }
    }

    const WorldState& world_;
    const Algorithm& algorithm_;
    const Schedule& schedule_;
    Trace& trace_;
    std::vector<RobotRun> state_;
    std::priority_queue<Pending, std::vector<Pending>, std::greater<>> queue_;
    double now_ = 0.0;
    double base_ = 0.0;
    double min_sep_ = std::numeric_limits<double>::infinity();
    int pending_moves_ = 0;

public:
    void set_base(double b) { base_ = b; }
};

}  // namespace

Trace run(const WorldState& world, const Algorithm& algorithm, const Schedule& schedule,
          const TerminationPredicate& done, long max_cycles) {
    if (max_cycles < 1) throw std::invalid_argument("run: max_cycles must be at least 1");
    Trace trace;
    trace.initial = world;
    trace.final_world = world;

    if (done(world)) {
        trace.outcome = Outcome::converged;
        return trace;
    }

    if (schedule.kind == ScheduleKind::async) {
        AsyncEngine engine(world, algorithm, schedule, trace);
        engine.set_base(world.clock);
        try {
            bool ended = false;
            for (long round = 0; round < max_cycles && !ended; ++round) {
                ended = engine.run_round(round, done);
                trace.cycles_used = round + 1;
            }
            if (!ended) trace.outcome = Outcome::budget_exhausted;
        } catch (const SimulationFault& f) {
            trace.outcome = Outcome::fault;
            trace.diagnostic = f.what();
        }
        trace.final_world = engine.snapshot_world(engine.now());
        trace.min_separation = engine.min_separation();
        return trace;
    }

    WorldState current = world;
    std::vector<bool> stayed(world.robots.size(), false);
    trace.outcome = Outcome::budget_exhausted;
    try {
        for (long round = 0; round < max_cycles; ++round) {
            const auto active = next_activation(schedule, current, round);
            CycleResult res = execute_cycle(current, active, algorithm, round);
            trace.events.insert(trace.events.end(), std::make_move_iterator(res.events.begin()),
                                std::make_move_iterator(res.events.end()));
            trace.min_separation = std::min(trace.min_separation, res.min_separation);
            current = std::move(res.world);
            trace.cycles_used = round + 1;
            if (res.any_move) {
                std::fill(stayed.begin(), stayed.end(), false);
            } else {
                for (RobotHandle h : active)
                    for (std::size_t i = 0; i < current.robots.size(); ++i)
                        if (current.robots[i].id == h) stayed[i] = true;
            }
            if (done(current)) {
                trace.outcome = Outcome::converged;
                break;
            }
            if (std::all_of(stayed.begin(), stayed.end(), [](bool b) { return b; })) {
                trace.outcome = Outcome::stalled;
                break;
            }
        }
    } catch (const SimulationFault& f) {
        trace.outcome = Outcome::fault;
        trace.diagnostic = f.what();
    }
    trace.final_world = current;
    return trace;
}

std::string_view phase_name(Phase p) {
    switch (p) {
        case Phase::wait: return "wait";
        case Phase::look: return "look";
        case Phase::compute: return "compute";
        case Phase::move: return "move";
    }
    return "?";
}

std::string_view outcome_name(Outcome o) {
    switch (o) {
        case Outcome::converged: return "converged";
        case Outcome::budget_exhausted: return "cycle-budget-exhausted";
        case Outcome::fault: return "fault";
        case Outcome::stalled: return "stalled";
    }
    return "?";
}

namespace {

void append_real(std::string& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out += buf;
}

void append_escaped(std::string& out, std::string_view s) {
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        if (static_cast<unsigned char>(c) < 0x20) {
            char buf[8];
            std::snprintf(buf, sizeof buf, "\\u%04x", c);
            out += buf;
            continue;
        }
        out += c;
    }
}

}  // namespace

std::string to_jsonl(const TraceEvent& e) {
    std::string out = "{\"clock\":";
    append_real(out, e.clock);
    out += ",\"cycle\":" + std::to_string(e.cycle);
    out += ",\"robot\":" + std::to_string(e.robot);
    out += ",\"phase\":\"";
    out += phase_name(e.phase);
    out += "\",\"x\":";
    append_real(out, e.position.x);
    out += ",\"y\":";
    append_real(out, e.position.y);
    if (e.destination) {
        out += ",\"dest_x\":";
        append_real(out, e.destination->x);
        out += ",\"dest_y\":";
        append_real(out, e.destination->y);
    }
    if (!e.tag.empty()) {
        out += ",\"tag\":\"";
        append_escaped(out, e.tag);
        out += '"';
    }
    out += '}';
    return out;
}

void write_trace(std::ostream& out, const Trace& trace) {
    for (const auto& e : trace.events) out << to_jsonl(e) << '\n';
}

std::string serialize_trace(const Trace& trace) {
    std::ostringstream out;
    write_trace(out, trace);
    return out.str();
}

std::vector<TraceEvent> parse_trace(std::istream& in) {
    std::vector<TraceEvent> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto j = nlohmann::json::parse(line);
        TraceEvent e;
        e.clock = j.at("clock").get<double>();
        e.cycle = j.at("cycle").get<long>();
        e.robot = j.at("robot").get<RobotHandle>();
        const auto phase = j.at("phase").get<std::string>();
        if (phase == "wait") e.phase = Phase::wait;
        else if (phase == "look") e.phase = Phase::look;
        else if (phase == "compute") e.phase = Phase::compute;
        else if (phase == "move") e.phase = Phase::move;
        else throw std::invalid_argument("trace: unknown phase " + phase);
        e.position = {j.at("x").get<double>(), j.at("y").get<double>()};
        if (j.contains("dest_x")) e.destination = Point{j.at("dest_x").get<double>(), j.at("dest_y").get<double>()};
        if (j.contains("tag")) e.tag = j.at("tag").get<std::string>();
        out.push_back(std::move(e));
    }
    return out;
}

}  // namespace ucircle
