#include "ucircle/algo_global.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <tuple>

namespace ucircle::global {

namespace {

constexpr double kSettled = 1e-6;
constexpr double kTie = 1e-9;

double on_sec_tol(const Circle& sec) { return kEps * std::max(1.0, sec.radius); }

bool same_point(Point a, Point b, double tol = kTie) { return distance(a, b) <= tol; }

// Candidate ordering shared by leader election and mover selection: higher Y
// first, then closer to L, then larger local x. Only the last key depends on
// the private chirality.
bool ranks_before(Point p, Point q, double cx) {
    if (std::abs(p.y - q.y) > kTie) return p.y > q.y;
    const double dp = std::abs(p.x - cx);
    const double dq = std::abs(q.x - cx);
    if (std::abs(dp - dq) > kTie) return dp < dq;
    return p.x > q.x;
}

bool mirror_symmetric(std::span<const Point> pts, double cx) {
    std::vector<bool> used(pts.size(), false);
    for (Point p : pts) {
        const Point m{2.0 * cx - p.x, p.y};
        bool found = false;
        for (std::size_t j = 0; j < pts.size() && !found; ++j) {
            if (!used[j] && same_point(pts[j], m, 1e-7)) {
                used[j] = true;
                found = true;
            }
        }
        if (!found) return false;
    }
    return true;
}

std::vector<Point> others_of(std::span<const Point> pts, std::size_t skip) {
    std::vector<Point> out;
    out.reserve(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i)
        if (i != skip) out.push_back(pts[i]);
    return out;
}

bool clear_for(std::span<const Point> pts, std::size_t mover, Point dst) {
    const auto obstacles = others_of(pts, mover);
    if (same_point(pts[mover], dst, 1e-12)) return false;
    if (!is_clear_motion(pts[mover], dst, obstacles)) return false;
    return is_free_path(Corridor(pts[mover], dst), obstacles);
}

std::vector<Point> gather(const Snapshot& snap) {
    std::vector<Point> pts;
    pts.reserve(snap.others.size() + 1);
    pts.push_back(snap.self);
    pts.insert(pts.end(), snap.others.begin(), snap.others.end());
    return pts;
}

double angle_of(Point p, const Circle& c) { return std::atan2(p.y - c.center.y, p.x - c.center.x); }

double arc_distance(Point p, Point q, const Circle& c) {
    double d = std::abs(angle_of(p, c) - angle_of(q, c));
    if (d > std::numbers::pi) d = 2.0 * std::numbers::pi - d;
    return d * c.radius;
}

}  // namespace

GlobalParams GlobalParams::make(int n, double a) { return {n, a, compute_radius(a, n)}; }

double compute_radius(double a, int n) {
    if (n <= 1) throw std::invalid_argument("compute_radius: n must exceed 1");
    if (!(a > 3.0)) throw std::invalid_argument("compute_radius: a must exceed 3");
    return a / (2.0 * std::sin(std::numbers::pi / n));
}

SymmetryCase detect_symmetry(std::span<const Point> on_sec, const Circle& sec) {
    if (on_sec.empty()) throw std::invalid_argument("detect_symmetry: no on-circle points");
    const double cx = sec.center.x;
    std::vector<Point> cand;
    for (Point p : on_sec)
        if (std::abs(p.x - cx) > kTie) cand.push_back(p);
    SymmetryCase out;
    if (cand.empty()) return out;
    std::sort(cand.begin(), cand.end(), [cx](Point p, Point q) { return ranks_before(p, q, cx); });

    const Point top = cand.front();
    if (cand.size() > 1 && mirror_symmetric(on_sec, cx)) {
        const Point mate{2.0 * cx - top.x, top.y};
        for (std::size_t i = 1; i < cand.size(); ++i) {
            if (same_point(cand[i], mate, 1e-7)) {
                out.kind = SymmetryCase::Kind::case2;
                out.leader1 = top.x > cand[i].x ? top : cand[i];
                out.leader2 = top.x > cand[i].x ? cand[i] : top;
                return out;
            }
        }
    }
    out.kind = SymmetryCase::Kind::case1;
    out.leader1 = top;
    return out;
}

TargetSet compute_target_points(int n, const Circle& sec) {
    if (n < 1) throw std::invalid_argument("compute_target_points: n must be positive");
    TargetSet out;
    out.anchor = sec.center;
    out.points.reserve(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        const double th = 2.0 * std::numbers::pi * k / n;
        out.points.push_back({sec.center.x + sec.radius * std::sin(th), sec.center.y + sec.radius * std::cos(th)});
    }
    return out;
}

std::optional<ExpansionMove> expansion_move(std::span<const Point> points, std::size_t leader,
                                            const Circle& sec, const GlobalParams& params,
                                            bool mirrored_pair) {
    const Point lp = points[leader];
    const Point out_dir = lp - sec.center;
    const double len = norm(out_dir);
    if (len <= kEps) return std::nullopt;
    const Point u = (1.0 / len) * out_dir;

    // Mirror leaders move together; keeping both on their own side of L
    // (|x - cx| >= 1) keeps the pair apart.
    const auto side_ok = [&](Point from, Point to) {
        if (!mirrored_pair) return true;
        const double cx = sec.center.x;
        return std::min(std::abs(from.x - cx), std::abs(to.x - cx)) >= kBodyRadius + kEps &&
               (from.x - cx) * (to.x - cx) > 0.0;
    };

    const Point antipode = sec.center - sec.radius * u;
    const bool antipode_taken = std::any_of(points.begin(), points.end(),
                                            [&](Point p) { return same_point(p, antipode, kSettled); });
    if (antipode_taken) {
        const double d_r = 2.0 * (params.rad_req - sec.radius);
        return ExpansionMove{leader, lp + d_r * u, "expand-radial"};
    }

    std::size_t far = leader;
    double far_d = -1.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const double d = distance(points[i], lp);
        if (d > far_d + kTie || (std::abs(d - far_d) <= kTie && ranks_before(points[i], points[far], sec.center.x))) {
            far = i;
            far_d = d;
        }
    }
    const Point rf = points[far];
    const Point toward_c = sec.center - rf;
    if (far != leader && norm(toward_c) > kEps) {
        const Point q = rf + (2.0 * params.rad_req / norm(toward_c)) * toward_c;
        if (clear_for(points, leader, q) && side_ok(lp, q)) return ExpansionMove{leader, q, "expand-q"};
        if (!mirrored_pair) {
            std::vector<std::size_t> order(points.size());
            for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
            std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
                const double di = distance(points[i], q);
                const double dj = distance(points[j], q);
                if (std::abs(di - dj) > kTie) return di < dj;
                return ranks_before(points[i], points[j], sec.center.x);
            });
            for (std::size_t i : order) {
                if (i == leader || i == far) continue;
                if (clear_for(points, i, q)) return ExpansionMove{i, q, "expand-substitute"};
            }
        }
    }

    // Radial push until the leader is 2*rad_req from the farthest robot;
    // outward radial motion from the circle only increases distances.
    const Point w = lp - rf;
    const double b = dot(w, u);
    const double c = dot(w, w) - 4.0 * params.rad_req * params.rad_req;
    const double s = std::max(-b + std::sqrt(std::max(0.0, b * b - c)), 2.0 * (params.rad_req - sec.radius));
    return ExpansionMove{leader, lp + s * u, "expand-radial-fallback"};
}

Action sec_expansion(const Snapshot& snap, const GlobalParams& params) {
    const auto pts = gather(snap);
    const Circle sec = smallest_enclosing_circle(pts);
    std::vector<Point> on_sec;
    for (Point p : pts)
        if (sec.on_boundary(p, on_sec_tol(sec))) on_sec.push_back(p);
    const SymmetryCase sym = detect_symmetry(on_sec, sec);
    if (sym.kind == SymmetryCase::Kind::no_leader) return Action::stay("stall-no-leader");

    const auto index_of = [&](Point p) {
        for (std::size_t i = 0; i < pts.size(); ++i)
            if (same_point(pts[i], p, 0.0)) return i;
        return pts.size();
    };
    const bool pair = sym.kind == SymmetryCase::Kind::case2;
    for (Point leader : {sym.leader1, sym.leader2}) {
        const std::size_t li = index_of(leader);
        if (li == pts.size()) continue;
        const auto mv = expansion_move(pts, li, sec, params, pair);
        if (mv && mv->mover == 0) return Action::move_to(mv->destination, mv->tag);
        if (!pair) break;
    }
    return Action::stay("expand-wait");
}

namespace {

struct Step {
    std::size_t mover = 0;
    Point destination;
    std::string tag;
};

bool preserves_sec(std::vector<Point> pts, std::size_t mover, Point dst, const Circle& sec) {
    pts[mover] = dst;
    const Circle after = smallest_enclosing_circle(pts);
    const double tol = 1e-7 * std::max(1.0, sec.radius);
    return distance(after.center, sec.center) <= tol && std::abs(after.radius - sec.radius) <= tol;
}

// Single detour around whatever blocks the straight segment: waypoints on the
// perpendicular through the nearest blocker, smallest total length first.
std::optional<Point> detour(std::span<const Point> pts, std::size_t mover, Point target, const Circle& sec) {
    const Point p = pts[mover];
    const auto obstacles = others_of(pts, mover);
    std::optional<Point> blocker;
    double best = 0.0;
    for (Point o : obstacles) {
        const double d = distance_to_segment(o, p, target);
        if (d < 2.0 + kEps && (!blocker || d < best)) {
            blocker = o;
            best = d;
        }
    }
    if (!blocker) return std::nullopt;
    const Point dir = (1.0 / distance(p, target)) * (target - p);
    const Point perp{-dir.y, dir.x};
    std::optional<Point> choice;
    double choice_len = 0.0;
    for (double off : {2.2, 2.6, 3.2, 4.0, 5.0, 6.5, 8.0}) {
        for (double side : {1.0, -1.0}) {
            const Point w = *blocker + (side * off) * perp;
            if (distance(w, sec.center) > sec.radius - kEps) continue;
            if (!is_clear_motion(p, w, obstacles)) continue;
            if (!is_clear_motion(w, target, obstacles)) continue;
            const double len = distance(p, w) + distance(w, target);
            if (!choice || len < choice_len - kTie) {
                choice = w;
                choice_len = len;
            }
        }
        if (choice) break;
    }
    return choice;
}

std::optional<Step> try_move(std::span<const Point> pts, std::size_t i, Point target, const Circle& sec,
                             const std::string& tag) {
    const std::vector<Point> all(pts.begin(), pts.end());
    if (clear_for(pts, i, target) && preserves_sec(all, i, target, sec)) return Step{i, target, tag};
    if (auto w = detour(pts, i, target, sec); w && clear_for(pts, i, *w) && preserves_sec(all, i, *w, sec))
        return Step{i, *w, tag + "-detour"};
    return std::nullopt;
}

// Deterministic formation plan. Every robot evaluates the same plan on the
// same configuration; exactly one robot is selected to move.
std::optional<Step> formation_plan(std::span<const Point> pts, const Circle& sec, const GlobalParams& params,
                                   std::string& why) {
    const TargetSet ts = compute_target_points(params.n, sec);
    const auto& targets = ts.points;
    const double cx = sec.center.x;

    std::vector<bool> filled(targets.size(), false);
    std::vector<bool> settled(pts.size(), false);
    for (std::size_t k = 0; k < targets.size(); ++k)
        for (std::size_t i = 0; i < pts.size(); ++i)
            if (!settled[i] && distance(pts[i], targets[k]) <= kSettled) {
                filled[k] = true;
                settled[i] = true;
                break;
            }
    if (std::all_of(settled.begin(), settled.end(), [](bool s) { return s; })) {
        why = "formed";
        return std::nullopt;
    }

    const auto on_sec = [&](std::size_t i) { return sec.on_boundary(pts[i], on_sec_tol(sec)); };
    const auto metric = [&](std::size_t i, Point t) {
        return on_sec(i) ? arc_distance(pts[i], t, sec) : distance(pts[i], t);
    };

    struct Cand {
        std::size_t k;
        std::size_t i;
        double d;
        bool settle;
    };
    std::vector<Cand> cands;
    for (std::size_t k = 0; k < targets.size(); ++k) {
        if (filled[k]) continue;
        const bool vacant = is_vacant_target(targets[k], pts);
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (settled[i]) continue;
            const bool near = distance(pts[i], targets[k]) <= 3.0 + kEps;
            if (near) cands.push_back({k, i, distance(pts[i], targets[k]), true});
            else if (vacant) cands.push_back({k, i, metric(i, targets[k]), false});
        }
    }
    std::sort(cands.begin(), cands.end(), [&](const Cand& u, const Cand& v) {
        if (u.settle != v.settle) return u.settle;
        const Point tu = targets[u.k];
        const Point tv = targets[v.k];
        if (std::abs(tu.y - tv.y) > kTie) return tu.y > tv.y;
        if (std::abs(u.d - v.d) > kTie) return u.d < v.d;
        if (u.i != v.i && !same_point(pts[u.i], pts[v.i], 0.0)) return ranks_before(pts[u.i], pts[v.i], cx);
        return ranks_before(tu, tv, cx);
    });

    // Top target with a tie for nearest robot: nobody takes it this round.
    const auto top_tied = [&](std::size_t k) {
        if (k != 0) return false;
        double d1 = std::numeric_limits<double>::infinity();
        double d2 = d1;
        for (const Cand& c : cands) {
            if (c.k != 0 || c.settle) continue;
            if (c.d < d1) {
                d2 = d1;
                d1 = c.d;
            } else if (c.d < d2) {
                d2 = c.d;
            }
        }
        return std::abs(d1 - d2) <= kTie;
    };

    // First pass follows the nearest-robot rule; the second admits any
    // unsettled robot so a blocked nearest robot cannot freeze the swarm.
    for (int pass = 0; pass < 2; ++pass) {
        std::vector<bool> seen(targets.size(), false);
        for (const Cand& c : cands) {
            const bool first_for_target = !seen[c.k];
            seen[c.k] = true;
            if (pass == 0 && !c.settle && !first_for_target) continue;
            if (pass == 0 && !c.settle && top_tied(c.k)) continue;
            if (auto s = try_move(pts, c.i, targets[c.k], sec, c.settle ? "settle" : "form")) return s;
        }
    }
    why = "stall-blocked";
    return std::nullopt;
}

}  // namespace

Action form_ucircle(const Snapshot& snap, const GlobalParams& params) {
    const auto pts = gather(snap);
    const Circle sec = smallest_enclosing_circle(pts);
    std::string why;
    const auto step = formation_plan(pts, sec, params, why);
    if (!step) return Action::stay(why);
    if (step->mover != 0) return Action::stay("form-wait");
    return Action::move_to(step->destination, step->tag);
}

Action global_step(const Snapshot& snap, const GlobalParams& params) {
    const auto pts = gather(snap);
    const Circle sec = smallest_enclosing_circle(pts);
    if (sec.radius < params.rad_req - kEps) return sec_expansion(snap, params);
    return form_ucircle(snap, params);
}

Algorithm make_algorithm(const GlobalParams& params) {
    return [params](const Snapshot& snap) { return global_step(snap, params); };
}

bool is_formed(std::span<const Point> centers, const GlobalParams& params) {
    if (centers.empty()) return false;
    const Circle sec = smallest_enclosing_circle(centers);
    if (sec.radius < params.rad_req - kEps) return false;
    const TargetSet ts = compute_target_points(params.n, sec);
    if (ts.points.size() != centers.size()) return false;
    std::vector<bool> used(ts.points.size(), false);
    for (Point p : centers) {
        bool hit = false;
        for (std::size_t k = 0; k < ts.points.size() && !hit; ++k) {
            if (!used[k] && distance(p, ts.points[k]) <= kSettled) {
                used[k] = true;
                hit = true;
            }
        }
        if (!hit) return false;
    }
    return true;
}

}  // namespace ucircle::global
