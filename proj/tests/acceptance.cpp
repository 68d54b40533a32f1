// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails.

#include "support/suites.hpp"

#include "ucircle/algo_global.hpp"
#include "ucircle/algo_local.hpp"
#include "ucircle/geometry.hpp"
#include "ucircle/harness.hpp"
#include "ucircle/kernels.hpp"
#include "ucircle/sim.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <string>
#include <vector>

using namespace ucircle;

namespace {

struct Verdict {
    bool pass = true;
    std::string detail;
};

struct Run {
    std::string name;
    harness::ScenarioConfig cfg;
    std::string trace;
    std::string summary;
    harness::RunResult result;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::vector<Run> run_all(const std::vector<suites::NamedScenario>& scenarios) {
    std::vector<Run> runs(scenarios.size());
    kernels::parallel_for(scenarios.size(), kernels::max_threads(), [&](std::size_t i) {
        Run& r = runs[i];
        r.name = scenarios[i].name;
        r.cfg = scenarios[i].cfg;
        r.result = harness::run_scenario(r.cfg);
        r.trace = serialize_trace(r.result.trace);
        r.summary = harness::summary_json(r.result.summary);
    });
    return runs;
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string first_failures(const std::vector<std::string>& bad) {
    std::string s;
    for (std::size_t i = 0; i < bad.size() && i < 3; ++i) s += (i ? ", " : " e.g. ") + bad[i];
    return s;
}

Verdict radius_grid() {
    const auto t0 = Clock::now();
    double worst = 0.0;
    for (double a : {3.1, 4.0, 7.5})
        for (int n = 2; n <= 24; ++n) {
            const double r = global::compute_radius(a, n);
            worst = std::max(worst, std::abs(2.0 * r * std::sin(std::numbers::pi / n) - a));
        }
    const double t = seconds_since(t0);
    Verdict v;
    v.pass = worst <= 1e-9 && t < 1.0;
    v.detail = "69 cases, max residual " + num(worst) + ", " + num(t) + " s";
    return v;
}

Verdict sec_oracle() {
    const auto t0 = Clock::now();
    double worst = 0.0;
    for (int set = 0; set < 500; ++set) {
        std::mt19937_64 rng(0x5ec0000u + static_cast<unsigned>(set));
        std::uniform_real_distribution<double> coord(-100.0, 100.0);
        const int n = 1 + set % 12;
        std::vector<Point> pts;
        for (int i = 0; i < n; ++i) pts.push_back({coord(rng), coord(rng)});
        const Circle inc = smallest_enclosing_circle(pts);
        const Circle brute = kernels::sec_brute_force(pts);
        worst = std::max({worst, distance(inc.center, brute.center), std::abs(inc.radius - brute.radius)});
    }
    const double t = seconds_since(t0);
    Verdict v;
    v.pass = worst <= 1e-9 && t < 10.0;
    v.detail = "500 sets, max deviation " + num(worst) + ", " + num(t) + " s";
    return v;
}

Verdict global_convergence(const std::vector<Run>& runs, double t) {
    std::vector<std::string> bad;
    int stalls = 0;
    for (const auto& r : runs) {
        const auto& s = r.result.summary;
        if (s.outcome == Outcome::stalled) {
            ++stalls;
            if (harness::exit_code(s.outcome) != 4 || s.diagnostic.empty()) bad.push_back(r.name + " (undiagnosed stall)");
            else bad.push_back(r.name + " (" + s.diagnostic.substr(0, 40) + ")");
            continue;
        }
        if (s.outcome != Outcome::converged || s.cycles_used > 200L * r.cfg.n || s.uniformity_error >= 1e-6 ||
            s.spacing_min < r.cfg.a - 1e-6)
            bad.push_back(r.name);
    }
    Verdict v;
    v.pass = bad.empty() && t < 120.0;
    v.detail = std::to_string(runs.size() - bad.size()) + "/" + std::to_string(runs.size()) + " converged, " +
               std::to_string(stalls) + " stalls, " + num(t) + " s" + first_failures(bad);
    return v;
}

Verdict safety(const std::vector<const std::vector<Run>*>& groups) {
    double worst = std::numeric_limits<double>::infinity();
    std::size_t count = 0;
    std::vector<std::string> bad;
    for (const auto* g : groups)
        for (const auto& r : *g) {
            ++count;
            worst = std::min(worst, r.result.summary.min_pairwise_dist);
            if (r.result.summary.outcome == Outcome::fault || r.result.summary.min_pairwise_dist < 2.0 - 1e-9)
                bad.push_back(r.name);
        }
    Verdict v;
    v.pass = bad.empty();
    v.detail = std::to_string(count) + " runs, min center distance " + num(worst) + ", " +
               std::to_string(bad.size()) + " faults" + first_failures(bad);
    return v;
}

// "psi7-hop" -> 7
int psi_of(const std::string& tag) {
    if (tag.size() < 4 || tag.compare(0, 3, "psi") != 0) return -1;
    const char d = tag[3];
    if (d < '0' || d > '9') return -1;
    if (tag.size() > 4 && tag[4] != '-') return -1;
    return d - '0';
}

Verdict local_convergence(const std::vector<Run>& runs, double t) {
    std::vector<std::string> bad;
    std::array<bool, 10> seen{};
    for (const auto& r : runs) {
        const auto& s = r.result.summary;
        if (s.outcome != Outcome::converged || s.cycles_used > 200L * r.cfg.n) bad.push_back(r.name);
        for (const auto& e : r.result.trace.events)
            if (const int k = psi_of(e.tag); k >= 0) seen[k] = true;
    }
    std::string missing;
    for (int k = 0; k < 10; ++k)
        if (!seen[k]) missing += " psi" + std::to_string(k);
    Verdict v;
    v.pass = bad.empty() && missing.empty() && t < 300.0;
    v.detail = std::to_string(runs.size() - bad.size()) + "/" + std::to_string(runs.size()) +
               " converged, psi coverage " + (missing.empty() ? "0-9 complete" : "missing" + missing) + ", " +
               num(t) + " s" + first_failures(bad);
    return v;
}

Verdict nonuniform(const std::vector<Run>& uniform, const std::vector<Run>& spread) {
    // (a) equal per-robot radii reproduce the uniform traces byte for byte.
    std::size_t identical = 0;
    std::vector<suites::NamedScenario> twins;
    for (const auto& r : uniform) {
        auto cfg = r.cfg;
        cfg.algorithm = harness::AlgorithmKind::local_nonuniform;
        cfg.vis.assign(static_cast<std::size_t>(cfg.n), r.cfg.vis.front());
        twins.push_back({r.name, cfg});
    }
    const auto twin_runs = run_all(twins);
    for (std::size_t i = 0; i < uniform.size(); ++i)
        if (twin_runs[i].trace == uniform[i].trace && twin_runs[i].summary == uniform[i].summary) ++identical;

    // (b) radii spread over [rad/3, rad]: converge or a diagnosed stall.
    std::size_t converged = 0, diagnosed = 0;
    std::vector<std::string> bad;
    for (const auto& r : spread) {
        const auto& s = r.result.summary;
        if (s.outcome == Outcome::converged) ++converged;
        else if (s.outcome == Outcome::stalled && harness::exit_code(s.outcome) == 4 && !s.diagnostic.empty()) ++diagnosed;
        else bad.push_back(r.name + " " + std::string(harness::summary_outcome_name(s.outcome)));
    }
    Verdict v;
    v.pass = identical == uniform.size() && bad.empty();
    v.detail = "(a) " + std::to_string(identical) + "/" + std::to_string(uniform.size()) +
               " byte-identical; (b) " + std::to_string(converged) + " converged, " + std::to_string(diagnosed) +
               " diagnosed stalls, " + std::to_string(bad.size()) + " other" + first_failures(bad);
    return v;
}

// Two- and three-robot scenes on a grid of radial distances and Phi classes;
// one synchronous round each.
Verdict micro_scenes() {
    const auto params = local::LocalParams::make(8, 20.0);
    const Algorithm algo = local::make_algorithm(params);
    const Circle& cir = params.cir;
    const std::vector<double> radii = {0.0, 5.0, 10.0, 15.0, 17.5, 19.0, 20.0, 21.0, 22.5, 25.0, 30.0, 35.0};
    const std::vector<std::pair<double, double>> vis_pairs = {{10, 10}, {20, 20}, {6, 20}, {12, 8}};
    const std::vector<double> headings = {0.0, 90.0, 180.0, 270.0};

    std::size_t scenes = 0, mismatched = 0, bad_moves = 0, moves = 0, slot_waits = 0;
    std::set<int> phis;
    std::vector<std::string> bad;

    const auto check = [&](const std::vector<Point>& pts, const std::vector<double>& vis, const std::string& label) {
        for (std::size_t i = 0; i < pts.size(); ++i)
            for (std::size_t j = i + 1; j < pts.size(); ++j)
                if (distance(pts[i], pts[j]) < 2.1) return;
        WorldState w;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            RobotState r;
            r.id = i;
            r.center = pts[i];
            r.vis_radius = vis[i];
            r.frame = FrameKind::full_axes;
            w.robots.push_back(r);
        }
        w.params.n = params.n;
        w.params.rad = cir.radius;
        ++scenes;
        std::set<std::size_t> eligible, moved;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            std::vector<Point> seen;
            for (std::size_t j = 0; j < pts.size(); ++j)
                if (j != i && distance(pts[i], pts[j]) <= vis[i]) seen.push_back(pts[j]);
            if (local::eligible_to_move(pts[i], seen, cir)) eligible.insert(i);
        }
        std::vector<RobotHandle> all(pts.size());
        for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
        CycleResult res;
        try {
            res = execute_cycle(w, all, algo, 0);
        } catch (const SimulationFault& f) {
            bad.push_back(label + " fault");
            ++mismatched;
            return;
        }
        for (const auto& e : res.events) {
            if (e.phase != Phase::move || !e.destination) continue;
            moved.insert(e.robot);
            ++moves;
            if (!local::satisfies_constraint2(e.position, *e.destination, cir.center, 1e-9)) {
                ++bad_moves;
                bad.push_back(label + " r" + std::to_string(e.robot) + " direction");
            }
        }
        // Eligible robots settled on a target have nothing to do; a rule may
        // also hold an eligible robot back while its landing slot is taken.
        std::set<std::size_t> expected;
        for (std::size_t i : eligible) {
            bool settled = false;
            for (Point t : params.targets.points) settled = settled || distance(pts[i], t) <= 1e-6;
            bool waits = false;
            for (const auto& e : res.events)
                if (e.phase == Phase::compute && e.robot == i && e.tag.ends_with("-wait")) waits = true;
            if (waits) ++slot_waits;
            if (!settled && !waits) expected.insert(i);
        }
        if (moved != expected) {
            ++mismatched;
            std::string tags;
            for (const auto& e : res.events)
                if (e.phase == Phase::compute) tags += " " + std::to_string(e.robot) + ":" + e.tag;
            bad.push_back(label + tags);
        }
    };

    for (double ri : radii)
        for (const auto& [vi, vj] : vis_pairs)
            for (int phi = 1; phi <= 4; ++phi) {
                double d = 0.0;
                switch (phi) {
                    case 1: d = vi + vj + 3.0; break;
                    case 2: d = vi + vj; break;
                    case 3: d = 0.5 * (std::min(vi, vj) + std::max(vi, vj)); break;
                    case 4: d = std::min(vi, vj) - 1.5; break;
                }
                if (phi == 3 && vi == vj) continue;
                for (double hdg : headings) {
                    const Point pi = suites::polar(ri, 100.0);
                    const Point pj = pi + suites::polar(d, hdg);
                    const auto cls = local::classify_phi({pi, vi}, {pj, vj}, pi, pj);
                    if (static_cast<int>(cls.kind) + 1 != phi) continue;
                    phis.insert(phi);
                    const std::string label = "r" + std::to_string(ri) + " phi" + std::to_string(phi) + " h" +
                                              std::to_string(static_cast<int>(hdg));
                    check({pi, pj}, {vi, vj}, label);
                    // Third robot on the far side of CIR from the first.
                    for (double rk : {12.0, 27.0}) check({pi, pj, suites::polar(rk, -40.0)}, {vi, vj, 15.0}, label + " +k");
                }
            }

    Verdict v;
    v.pass = scenes >= 500 && mismatched == 0 && bad_moves == 0 && phis.size() == 4;
    v.detail = std::to_string(scenes) + " scenes, " + std::to_string(phis.size()) + " phi classes, " +
               std::to_string(moves) + " moves, " + std::to_string(slot_waits) + " slot waits, " +
               std::to_string(mismatched) + " eligibility mismatches, " +
               std::to_string(bad_moves) + " direction violations" + first_failures(bad);
    return v;
}

Verdict determinism(const std::vector<const std::vector<Run>*>& groups) {
    std::vector<suites::NamedScenario> again;
    std::vector<const Run*> first;
    for (const auto* g : groups)
        for (const auto& r : *g) {
            again.push_back({r.name, r.cfg});
            first.push_back(&r);
        }
    const auto second = run_all(again);
    std::vector<std::string> bad;
    for (std::size_t i = 0; i < second.size(); ++i)
        if (second[i].trace != first[i]->trace || second[i].summary != first[i]->summary) bad.push_back(second[i].name);
    Verdict v;
    v.pass = bad.empty();
    v.detail = std::to_string(second.size() - bad.size()) + "/" + std::to_string(second.size()) +
               " reruns byte-identical" + first_failures(bad);
    return v;
}

Verdict fsync_progress() {
    const auto runs = run_all(suites::global_grid(ScheduleKind::fsync));
    std::size_t rounds = 0;
    std::vector<std::string> bad;
    for (const auto& r : runs) {
        const auto& tr = r.result.trace;
        std::vector<bool> moved(static_cast<std::size_t>(tr.cycles_used), false);
        for (const auto& e : tr.events)
            if (e.phase == Phase::move && e.cycle >= 0 && e.cycle < tr.cycles_used) moved[e.cycle] = true;
        rounds += moved.size();
        const bool all = std::all_of(moved.begin(), moved.end(), [](bool b) { return b; });
        if (!all || r.result.summary.outcome != Outcome::converged) bad.push_back(r.name);
    }
    Verdict v;
    v.pass = bad.empty();
    v.detail = std::to_string(runs.size()) + " runs, " + std::to_string(rounds) + " rounds, " +
               std::to_string(bad.size()) + " runs with an idle round or no convergence" + first_failures(bad);
    return v;
}

}  // namespace

int main() {
    std::map<int, Verdict> verdicts;
    verdicts[1] = radius_grid();
    verdicts[2] = sec_oracle();

    auto t0 = Clock::now();
    const auto global_runs = run_all(suites::global_grid(ScheduleKind::ssync));
    verdicts[3] = global_convergence(global_runs, seconds_since(t0));

    t0 = Clock::now();
    const auto local_runs = run_all(suites::local_suite(false));
    verdicts[5] = local_convergence(local_runs, seconds_since(t0));

    const auto spread_runs = run_all(suites::local_suite(true));
    verdicts[6] = nonuniform(local_runs, spread_runs);
    verdicts[4] = safety({&global_runs, &local_runs, &spread_runs});
    verdicts[7] = micro_scenes();
    verdicts[8] = determinism({&global_runs, &local_runs, &spread_runs});
    verdicts[9] = fsync_progress();

    bool ok = true;
    for (const auto& [k, v] : verdicts) {
        std::printf("criterion %d: %s  %s\n", k, v.pass ? "PASS" : "FAIL", v.detail.c_str());
        ok = ok && v.pass;
    }
    return ok ? 0 : 1;
}
