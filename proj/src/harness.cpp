#include "ucircle/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>
#include <set>

namespace ucircle::harness {

namespace {

using nlohmann::json;

constexpr double kPlacementClearance = 2.1;
constexpr int kPlacementAttempts = 200000;

[[noreturn]] void fail(const std::string& msg) { throw ConfigError(msg); }

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
    if (!j.is_object()) fail(where + " must be an object");
    for (const auto& [key, _] : j.items())
        if (!allowed.count(key)) fail(where + ": unknown field '" + key + "'");
}

double get_real(const json& j, const std::string& key) {
    const auto& v = j.at(key);
    if (!v.is_number()) fail("field '" + key + "' must be a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) fail("field '" + key + "' must be finite");
    return d;
}

long get_int(const json& j, const std::string& key) {
    const auto& v = j.at(key);
    if (!v.is_number_integer()) fail("field '" + key + "' must be an integer");
    return v.get<long>();
}

Point get_point(const json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        fail("explicit points must be [x, y] pairs");
    const Point p{j[0].get<double>(), j[1].get<double>()};
    if (!is_finite(p)) fail("explicit points must be finite");
    return p;
}

Placement parse_placement(const json& j) {
    Placement p;
    if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) fail("placement needs a string 'kind'");
    const auto kind = j["kind"].get<std::string>();
    if (kind == "random-disc") {
        check_keys(j, {"kind", "radius"}, "placement");
        p.kind = Placement::Kind::random_disc;
        p.radius = get_real(j, "radius");
        if (!(p.radius > 0.0)) fail("placement radius must be positive");
    } else if (kind == "random-annulus") {
        check_keys(j, {"kind", "inner", "outer"}, "placement");
        p.kind = Placement::Kind::random_annulus;
        p.inner = get_real(j, "inner");
        p.outer = get_real(j, "outer");
        if (!(p.inner >= 0.0 && p.outer > p.inner)) fail("annulus needs 0 <= inner < outer");
    } else if (kind == "explicit") {
        check_keys(j, {"kind", "points"}, "placement");
        p.kind = Placement::Kind::explicit_points;
        if (!j.contains("points") || !j["points"].is_array()) fail("explicit placement needs 'points'");
        for (const auto& q : j["points"]) p.points.push_back(get_point(q));
    } else {
        fail("unknown placement kind '" + kind + "'");
    }
    return p;
}

// Uniform double in [0, 1) from 53 random bits; std distributions are not
// portable across standard libraries.
double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t x = seed ^ (0x9e3779b97f4a7c15ULL * (stream + 1));
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

Point sample(const Placement& p, std::mt19937_64& rng) {
    const double u = uniform01(rng);
    const double th = 2.0 * std::numbers::pi * uniform01(rng);
    double r = 0.0;
    if (p.kind == Placement::Kind::random_disc) {
        r = p.radius * std::sqrt(u);
    } else {
        r = std::sqrt(p.inner * p.inner + u * (p.outer * p.outer - p.inner * p.inner));
    }
    return {r * std::cos(th), r * std::sin(th)};
}

double min_static_distance(const WorldState& w) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < w.robots.size(); ++i)
        for (std::size_t j = i + 1; j < w.robots.size(); ++j)
            best = std::min(best, distance(w.robots[i].center, w.robots[j].center));
    return best;
}

std::string format_real(double v) {
    if (!std::isfinite(v)) return "null";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

global::GlobalParams global_params(const ScenarioConfig& cfg) { return global::GlobalParams::make(cfg.n, cfg.a); }

local::LocalParams local_params(const ScenarioConfig& cfg) { return local::LocalParams::make(cfg.n, cfg.rad); }

}  // namespace

ScenarioConfig parse_config(const json& j) {
    check_keys(j, {"algorithm", "n", "a", "rad", "vis", "scheduler", "seed", "max_cycles", "fairness_bound",
                   "placement"},
               "scenario");
    ScenarioConfig cfg;
    for (const char* key : {"algorithm", "n", "scheduler", "seed", "placement"})
        if (!j.contains(key)) fail(std::string("missing field '") + key + "'");

    if (!j["algorithm"].is_string()) fail("'algorithm' must be a string");
    const auto algo = j["algorithm"].get<std::string>();
    if (algo == "global") cfg.algorithm = AlgorithmKind::global;
    else if (algo == "local") cfg.algorithm = AlgorithmKind::local;
    else if (algo == "local-nonuniform") cfg.algorithm = AlgorithmKind::local_nonuniform;
    else fail("unknown algorithm '" + algo + "'");

    const long n = get_int(j, "n");
    if (n <= 1 || n > 100000) fail("n must be an integer greater than 1");
    cfg.n = static_cast<int>(n);

    if (!j["scheduler"].is_string()) fail("'scheduler' must be a string");
    const auto sched = j["scheduler"].get<std::string>();
    if (sched == "FSYNC") cfg.scheduler = ScheduleKind::fsync;
    else if (sched == "SSYNC") cfg.scheduler = ScheduleKind::ssync;
    else if (sched == "ASYNC") cfg.scheduler = ScheduleKind::async;
    else fail("scheduler must be FSYNC, SSYNC or ASYNC");

    if (!j["seed"].is_number_unsigned() && !j["seed"].is_number_integer()) fail("'seed' must be an integer");
    if (j["seed"].is_number_integer() && !j["seed"].is_number_unsigned() && j["seed"].get<long long>() < 0)
        fail("'seed' must be non-negative");
    cfg.seed = j["seed"].get<std::uint64_t>();

    cfg.max_cycles = 200L * cfg.n;
    if (j.contains("max_cycles")) {
        cfg.max_cycles = get_int(j, "max_cycles");
        if (cfg.max_cycles < 1) fail("max_cycles must be at least 1");
    }
    cfg.fairness_bound = 3 * cfg.n;
    if (j.contains("fairness_bound")) {
        const long f = get_int(j, "fairness_bound");
        if (f < 1 || f > 1000000) fail("fairness_bound must be at least 1");
        cfg.fairness_bound = static_cast<int>(f);
    }

    if (cfg.algorithm == AlgorithmKind::global) {
        if (!j.contains("a")) fail("global algorithm needs 'a'");
        if (j.contains("rad")) fail("'rad' applies to the local algorithms only");
        if (j.contains("vis")) fail("the global algorithm has unlimited visibility; drop 'vis'");
        cfg.a = get_real(j, "a");
        if (!(cfg.a > 3.0)) fail("a must exceed 3");
    } else {
        if (!j.contains("rad") || !j.contains("vis")) fail("local algorithms need 'rad' and 'vis'");
        if (j.contains("a")) fail("'a' applies to the global algorithm only");
        cfg.rad = get_real(j, "rad");
        if (!(cfg.rad > 0.0)) fail("rad must be positive");
        if (2.0 * std::numbers::pi * cfg.rad / cfg.n < 4.0) fail("rad too small: need 2*pi*rad/n >= 4");
        const auto& v = j["vis"];
        if (v.is_number()) {
            cfg.vis = {get_real(j, "vis")};
        } else if (v.is_array()) {
            if (cfg.algorithm == AlgorithmKind::local) fail("per-robot 'vis' needs algorithm local-nonuniform");
            if (v.size() != static_cast<std::size_t>(cfg.n)) fail("'vis' list must have n entries");
            for (const auto& x : v) {
                if (!x.is_number()) fail("'vis' entries must be numbers");
                cfg.vis.push_back(x.get<double>());
            }
        } else {
            fail("'vis' must be a number or a list of numbers");
        }
        for (double x : cfg.vis)
            if (!(x > 2.0) || !std::isfinite(x)) fail("visibility radii must be finite and exceed 2");
    }

    cfg.placement = parse_placement(j["placement"]);
    if (cfg.placement.kind == Placement::Kind::explicit_points) {
        const auto& pts = cfg.placement.points;
        if (pts.size() != static_cast<std::size_t>(cfg.n)) fail("explicit placement must list n points");
        for (std::size_t i = 0; i < pts.size(); ++i)
            for (std::size_t k = i + 1; k < pts.size(); ++k)
                if (distance(pts[i], pts[k]) < 2.0) fail("explicit points must be at least 2 apart");
    }
    return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail("cannot open config " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        fail(path.string() + ": " + e.what());
    }
    return parse_config(j);
}

json to_json(const ScenarioConfig& cfg) {
    json j;
    j["algorithm"] = cfg.algorithm == AlgorithmKind::global  ? "global"
                     : cfg.algorithm == AlgorithmKind::local ? "local"
                                                             : "local-nonuniform";
    j["n"] = cfg.n;
    if (cfg.algorithm == AlgorithmKind::global) {
        j["a"] = cfg.a;
    } else {
        j["rad"] = cfg.rad;
        if (cfg.vis.size() == 1) j["vis"] = cfg.vis[0];
        else j["vis"] = cfg.vis;
    }
    j["scheduler"] = cfg.scheduler == ScheduleKind::fsync ? "FSYNC"
                     : cfg.scheduler == ScheduleKind::ssync ? "SSYNC"
                                                            : "ASYNC";
    j["seed"] = cfg.seed;
    j["max_cycles"] = cfg.max_cycles;
    j["fairness_bound"] = cfg.fairness_bound;
    json p;
    switch (cfg.placement.kind) {
        case Placement::Kind::random_disc:
            p = {{"kind", "random-disc"}, {"radius", cfg.placement.radius}};
            break;
        case Placement::Kind::random_annulus:
            p = {{"kind", "random-annulus"}, {"inner", cfg.placement.inner}, {"outer", cfg.placement.outer}};
            break;
        case Placement::Kind::explicit_points: {
            json pts = json::array();
            for (Point q : cfg.placement.points) pts.push_back({q.x, q.y});
            p = {{"kind", "explicit"}, {"points", pts}};
            break;
        }
    }
    j["placement"] = p;
    return j;
}

WorldState generate_scenario(const ScenarioConfig& cfg) {
    WorldState w;
    std::mt19937_64 rng(stream_seed(cfg.seed, 0));
    std::vector<Point> pts;
    if (cfg.placement.kind == Placement::Kind::explicit_points) {
        pts = cfg.placement.points;
    } else {
        int attempts = 0;
        while (pts.size() < static_cast<std::size_t>(cfg.n)) {
            if (++attempts > kPlacementAttempts) fail("placement infeasible: could not fit n robots");
            const Point p = sample(cfg.placement, rng);
            if (std::all_of(pts.begin(), pts.end(), [&](Point q) { return distance(p, q) >= kPlacementClearance; }))
                pts.push_back(p);
        }
    }

    const bool global = cfg.algorithm == AlgorithmKind::global;
    std::mt19937_64 chir(stream_seed(cfg.seed, 1));
    for (std::size_t i = 0; i < pts.size(); ++i) {
        RobotState r;
        r.id = i;
        r.center = pts[i];
        r.frame = global ? FrameKind::y_only : FrameKind::full_axes;
        r.chirality = uniform01(chir) < 0.5 ? Chirality::right : Chirality::left;
        if (!cfg.vis.empty()) r.vis_radius = cfg.vis.size() == 1 ? cfg.vis[0] : cfg.vis[i];
        w.robots.push_back(r);
    }
    w.params.n = cfg.n;
    w.params.a = cfg.a;
    w.params.rad = cfg.rad;
    return w;
}

Algorithm algorithm_for(const ScenarioConfig& cfg) {
    if (cfg.algorithm == AlgorithmKind::global) return global::make_algorithm(global_params(cfg));
    return local::make_algorithm(local_params(cfg));
}

TerminationPredicate done_for(const ScenarioConfig& cfg) {
    if (cfg.algorithm == AlgorithmKind::global) {
        const auto params = global_params(cfg);
        return [params](const WorldState& w) { return global::is_formed(w.centers(), params); };
    }
    const auto params = local_params(cfg);
    return [params](const WorldState& w) { return local::is_formed(w.centers(), params); };
}

Point metric_center(const ScenarioConfig& cfg, const WorldState& world) {
    if (cfg.algorithm == AlgorithmKind::global) {
        const auto c = world.centers();
        return smallest_enclosing_circle(c).center;
    }
    return {0.0, 0.0};
}

RunSummary compute_metrics(const Trace& trace, const WorldState& final_world, Point center) {
    RunSummary s;
    s.outcome = trace.outcome;
    s.cycles_used = trace.cycles_used;
    s.diagnostic = trace.diagnostic;
    s.min_pairwise_dist = std::min(trace.min_separation, min_static_distance(trace.initial));
    s.move_events = static_cast<std::size_t>(
        std::count_if(trace.events.begin(), trace.events.end(), [](const TraceEvent& e) { return e.phase == Phase::move; }));

    const auto& robots = final_world.robots;
    const std::size_t n = robots.size();
    if (n < 2) return s;
    std::vector<std::pair<double, Point>> polar;
    for (const auto& r : robots) polar.push_back({std::atan2(r.center.y - center.y, r.center.x - center.x), r.center});
    std::sort(polar.begin(), polar.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    const double ideal = 2.0 * std::numbers::pi / static_cast<double>(n);
    s.uniformity_error = 0.0;
    s.spacing_min = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        const auto& cur = polar[i];
        const auto& nxt = polar[(i + 1) % n];
        double gap = nxt.first - cur.first;
        if (i + 1 == n) gap += 2.0 * std::numbers::pi;
        s.uniformity_error = std::max(s.uniformity_error, std::abs(gap - ideal));
        s.spacing_min = std::min(s.spacing_min, distance(cur.second, nxt.second));
    }
    return s;
}

RunResult run_scenario(const ScenarioConfig& cfg) {
    const WorldState world = generate_scenario(cfg);
    const Schedule schedule{cfg.scheduler, stream_seed(cfg.seed, 2), cfg.fairness_bound};
    RunResult out;
    out.trace = run(world, algorithm_for(cfg), schedule, done_for(cfg), cfg.max_cycles);
    out.summary = compute_metrics(out.trace, out.trace.final_world, metric_center(cfg, out.trace.final_world));

    if (out.trace.outcome == Outcome::stalled) {
        std::string diag = "fixed-point";
        for (auto it = out.trace.events.rbegin(); it != out.trace.events.rend(); ++it) {
            if (it->phase == Phase::compute && it->tag.rfind("stall", 0) == 0) {
                diag = it->tag;
                break;
            }
        }
        if (cfg.algorithm != AlgorithmKind::global) {
            // Name the robots that still want to move and what holds them.
            std::vector<std::string> last(out.trace.final_world.robots.size());
            for (const auto& e : out.trace.events)
                if (e.phase == Phase::compute && e.robot < last.size()) last[e.robot] = e.tag;
            std::string waiting;
            for (std::size_t i = 0; i < last.size(); ++i) {
                if (last[i].empty() || last[i] == "ineligible" || last[i].rfind("psi1", 0) == 0) continue;
                waiting += (waiting.empty() ? "" : ",") + std::to_string(i) + ":" + last[i];
            }
            if (!waiting.empty()) diag += " waiting " + waiting;
        }
        diag += " at";
        for (const auto& r : out.trace.final_world.robots) diag += " (" + format_real(r.center.x) + "," + format_real(r.center.y) + ")";
        out.summary.diagnostic = diag;
        out.trace.diagnostic = diag;
    }
    return out;
}

std::string_view summary_outcome_name(Outcome o) {
    switch (o) {
        case Outcome::converged: return "converged";
        case Outcome::budget_exhausted: return "budget-exhausted";
        case Outcome::fault: return "fault";
        case Outcome::stalled: return "diagnosed-stall";
    }
    return "?";
}

std::string summary_json(const RunSummary& s) {
    std::string out = "{\"outcome\":\"";
    out += summary_outcome_name(s.outcome);
    out += "\",\"cycles_used\":" + std::to_string(s.cycles_used);
    out += ",\"min_pairwise_dist\":" + format_real(s.min_pairwise_dist);
    out += ",\"uniformity_error\":" + format_real(s.uniformity_error);
    out += ",\"spacing_min\":" + format_real(s.spacing_min);
    out += ",\"move_events\":" + std::to_string(s.move_events);
    out += ",\"diagnostic\":" + json(s.diagnostic).dump();
    out += '}';
    return out;
}

int exit_code(Outcome o) {
    switch (o) {
        case Outcome::converged: return 0;
        case Outcome::budget_exhausted: return 2;
        case Outcome::fault: return 3;
        case Outcome::stalled: return 4;
    }
    return 3;
}

}  // namespace ucircle::harness
