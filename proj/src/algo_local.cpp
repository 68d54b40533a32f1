#include "ucircle/algo_local.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace ucircle::local {

namespace {

constexpr double kSettled = 1e-6;
constexpr double kRadiusTol = 1e-9;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
// Extra room demanded around a landing point on CIR's outer ring so a robot
// sliding into the same slot cannot arrive concurrently.
constexpr double kRingLandingClear = 2.0 + kSlotChord + 1.0;
// How far below (inside) or above (outside) a deeper blocker a diving robot goes.
constexpr double kDiveMargin = 0.2;
// Spare clearance when parking beside or passing another robot.
constexpr double kPassGap = 0.05;
constexpr double kPassGap2 = 2.3;

double radius_of(Point p, const Circle& cir) { return distance(p, cir.center); }

double angle_of(Point p, const Circle& cir) { return std::atan2(p.y - cir.center.y, p.x - cir.center.x); }

Point at_polar(const Circle& cir, double r, double th) {
    return {cir.center.x + r * std::cos(th), cir.center.y + r * std::sin(th)};
}

// Clockwise angular offset from direction `from` to direction `to`, in [0, 2pi).
double cw_offset(double from, double to) {
    double d = std::fmod(from - to, kTwoPi);
    if (d < 0.0) d += kTwoPi;
    if (d > kTwoPi - 1e-12) d = 0.0;
    return d;
}

bool settled_at(Point p, const LocalParams& params) {
    return std::any_of(params.targets.points.begin(), params.targets.points.end(),
                       [&](Point t) { return distance(p, t) <= kSettled; });
}

std::vector<bool> filled_targets(Point self, std::span<const Point> visible, const LocalParams& params) {
    const auto& ts = params.targets.points;
    std::vector<bool> filled(ts.size(), false);
    for (std::size_t k = 0; k < ts.size(); ++k) {
        if (distance(self, ts[k]) <= kSettled) filled[k] = true;
        for (Point q : visible)
            if (distance(q, ts[k]) <= kSettled) filled[k] = true;
    }
    return filled;
}

// First unfilled target at or clockwise of the ray C -> p.
std::optional<std::size_t> next_target(Point p, const std::vector<bool>& filled, const LocalParams& params) {
    const double th = angle_of(p, params.cir);
    std::optional<std::size_t> best;
    double best_off = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < params.targets.points.size(); ++k) {
        if (filled[k]) continue;
        const double off = cw_offset(th, angle_of(params.targets.points[k], params.cir));
        if (off < best_off) {
            best_off = off;
            best = k;
        }
    }
    return best;
}

double hop_limit(double vis, const LocalParams& params) {
    if (!params.sight_guard) return std::numeric_limits<double>::infinity();
    // Two robots that cannot see each other (distance > vis) may both hop
    // toward each other; each hop of at most (vis - 2)/2 keeps them apart.
    return std::max(0.0, 0.5 * (vis - 2.0) - 0.01);
}

bool clear(Point from, Point to, std::span<const Point> visible) {
    return is_clear_motion(from, to, visible);
}

bool in_band(Point p, const LocalParams& params) {
    return std::abs(radius_of(p, params.cir) - params.cir.radius) <= kRingOffset + kRadiusTol;
}

struct Ctx {
    Point self;
    double vis;
    const LocalParams& params;
    std::span<const Point> visible;
    std::string* tag;

    void note(std::string_view s) const {
        if (tag) *tag = std::string(s);
    }
};

// Radial move to radius `r_to`, shortened to the hop limit. Falls back to
// the midpoint of the hop, then to staying.
std::optional<Point> radial_to(const Ctx& c, double r_to, bool need_vacant, std::string_view label) {
    const Circle& cir = c.params.cir;
    const double r0 = radius_of(c.self, cir);
    const double th = angle_of(c.self, cir);
    double len = std::min(std::abs(r_to - r0), hop_limit(c.vis, c.params));
    if (len <= 1e-12) return std::nullopt;
    const double sign = r_to > r0 ? 1.0 : -1.0;
    const Point full = at_polar(cir, r0 + sign * len, th);
    if (clear(c.self, full, c.visible) && (!need_vacant || is_vacant_target(full, c.visible))) {
        c.note(label);
        return full;
    }
    const Point half = at_polar(cir, r0 + sign * 0.5 * len, th);
    if (clear(c.self, half, c.visible)) {
        c.note(std::string(label) + "-mid");
        return half;
    }
    c.note(std::string(label) + "-blocked");
    return std::nullopt;
}

// One clockwise step along the circle through self, stopping exactly on the
// ray of target `k` when that is closer. `past` ignores the stop.
Point slide_destination(const Ctx& c, std::optional<std::size_t> k, bool past, double* step_out = nullptr) {
    const Circle& cir = c.params.cir;
    const double r0 = radius_of(c.self, cir);
    const double chord = std::min(kSlotChord, hop_limit(c.vis, c.params));
    const double step = 2.0 * std::asin(std::min(1.0, 0.5 * chord / r0));
    if (step_out) *step_out = step;
    const double th = angle_of(c.self, cir);
    Point dest = at_polar(cir, r0, th - step);
    if (k && !past) {
        const double phi = angle_of(c.params.targets.points[*k], cir);
        if (cw_offset(th, phi) <= step) dest = at_polar(cir, r0, phi);
    }
    return dest;
}

bool same_side_deeper(Point q, double r0, const Circle& cir, bool inside) {
    const double rq = radius_of(q, cir);
    if (inside) return rq < cir.radius - kEps && rq < r0 - kRadiusTol;
    return rq > cir.radius + kEps && rq > r0 + kRadiusTol;
}

// Nearest deeper same-side robot ahead of `p` that a slide along `ring` would
// have to get past.
std::optional<Point> robot_ahead(Point p, double ring, const Circle& cir, std::span<const Point> visible) {
    const double r0 = radius_of(p, cir);
    const bool inside = r0 < cir.radius;
    const double th = angle_of(p, cir);
    std::optional<Point> ahead;
    double best = 0.0;
    for (Point q : visible) {
        if (!same_side_deeper(q, r0, cir, inside)) continue;
        if (std::abs(radius_of(q, cir) - ring) >= 2.0 + kPassGap) continue;
        const double off = cw_offset(th, angle_of(q, cir));
        if (off > std::numbers::pi) continue;
        if (!ahead || off < best) {
            ahead = q;
            best = off;
        }
    }
    return ahead;
}

// Radial point just beyond `q`, or nothing when out of reach or blocked.
std::optional<Point> dive_point(Point p, Point q, const Circle& cir, double limit, std::span<const Point> visible) {
    const bool inside = radius_of(p, cir) < cir.radius;
    const double rq = radius_of(q, cir);
    const double to = inside ? rq - kDiveMargin : rq + kDiveMargin;
    if ((inside && to <= kEps) || std::abs(to - radius_of(p, cir)) > limit) return std::nullopt;
    const Point d = at_polar(cir, to, angle_of(p, cir));
    if (!is_clear_motion(p, d, visible)) return std::nullopt;
    return d;
}

// True when a robot parked at `p` on `ring` sits beside a deeper robot it can
// neither slide past nor dive beyond.
bool trapped(Point p, double ring, const Circle& cir, double limit, std::span<const Point> visible) {
    const auto q = robot_ahead(p, ring, cir, visible);
    if (!q) return false;
    const double rq = radius_of(*q, cir);
    const double off = cw_offset(angle_of(p, cir), angle_of(*q, cir));
    if (off > std::asin(std::min(1.0, kPassGap2 / rq)) + 1e-9) return false;
    if (rq * std::sin(std::min(off, 0.5 * std::numbers::pi)) < 2.0 + kEps) return true;
    return !dive_point(p, *q, cir, limit, visible);
}

// Ring slide. A deeper robot on the same side near the ring is ineligible
// while self is closer to CIR, so self must get past it: stop short with room
// to spare, then drop radially beyond it, which hands it the turn.
std::optional<Point> ring_slide(const Ctx& c, std::optional<std::size_t> k, double ring, bool past,
                                std::string_view label) {
    const Circle& cir = c.params.cir;
    const double r0 = radius_of(c.self, cir);
    if (r0 <= kEps || hop_limit(c.vis, c.params) <= 1e-9) return std::nullopt;
    const bool inside = r0 < cir.radius;
    const double th = angle_of(c.self, cir);
    double step = 0.0;
    Point dest = slide_destination(c, k, past, &step);
    const double planned = cw_offset(th, angle_of(dest, cir));

    const auto ahead = robot_ahead(c.self, ring, cir, c.visible);
    if (ahead) {
        const double ahead_off = cw_offset(th, angle_of(*ahead, cir));
        const double rq = radius_of(*ahead, cir);
        const double keep = std::asin(std::min(1.0, kPassGap2 / rq));
        const double perp = rq * std::sin(std::min(ahead_off, 0.5 * std::numbers::pi));
        const double limit = hop_limit(c.vis, c.params);
        if (ahead_off <= keep + 1e-9 && perp >= 2.0 + kEps) {
            // Parked beside it: go beyond it radially.
            if (auto d = dive_point(c.self, *ahead, cir, limit, c.visible)) {
                c.note(std::string(label) + "-dive");
                return d;
            }
        }
        if (ahead_off <= keep + 1e-9) {
            // Cannot dive past it: rise into the band and slide over it.
            const double to = inside ? rq + 2.0 + 2.0 * kPassGap : rq - 2.0 - 2.0 * kPassGap;
            const Point d = at_polar(cir, to, th);
            if ((inside ? to < cir.radius - kEps : to > cir.radius + kEps) && std::abs(to - r0) <= limit &&
                clear(c.self, d, c.visible)) {
                c.note(std::string(label) + "-rise");
                return d;
            }
            c.note(std::string(label) + "-rise-blocked");
            return std::nullopt;
        }
        if (planned > ahead_off - keep) {
            dest = at_polar(cir, r0, angle_of(*ahead, cir) + keep);
        }
    }
    if (distance(dest, c.self) <= 1e-12) {
        c.note(std::string(label) + "-stuck");
        return std::nullopt;
    }
    if (!clear(c.self, dest, c.visible)) {
        // A chord cuts inside the arc; shorter ones hug it past a close neighbour.
        const double off = cw_offset(th, angle_of(dest, cir));
        for (double f : {0.5, 0.25, 0.125}) {
            const Point d = at_polar(cir, r0, th - f * off);
            if (clear(c.self, d, c.visible)) {
                c.note(std::string(label) + "-short");
                return d;
            }
        }
        c.note(std::string(label) + "-blocked");
        return std::nullopt;
    }
    c.note(label);
    return dest;
}

double segment_distance(Point a, Point b, Point p, Point q) {
    const double d1 = cross(b - a, p - a);
    const double d2 = cross(b - a, q - a);
    const double d3 = cross(q - p, a - p);
    const double d4 = cross(q - p, b - p);
    if (((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0))) return 0.0;
    return std::min({distance_to_segment(a, p, q), distance_to_segment(b, p, q), distance_to_segment(p, a, b),
                     distance_to_segment(q, a, b)});
}

bool aligned(Point p, std::size_t k, const LocalParams& params);

// Slide inside the band between a ring and CIR. Claim lanes (the stretch of a
// target ray between the two rings) of unfilled targets are kept clear: the
// path may not come closer to a lane than it already is, except that self
// may stop exactly on the lane of its own vacant, uncontested target.
std::optional<Point> band_slide(const Ctx& c, std::optional<std::size_t> next, std::string_view label) {
    const Circle& cir = c.params.cir;
    if (hop_limit(c.vis, c.params) <= 1e-9) return std::nullopt;
    const Point dest = slide_destination(c, next, false);
    if (!clear(c.self, dest, c.visible)) return std::nullopt;
    const auto filled = filled_targets(c.self, c.visible, c.params);
    for (std::size_t k = 0; k < c.params.targets.points.size(); ++k) {
        if (filled[k]) continue;
        const double phi = angle_of(c.params.targets.points[k], cir);
        const Point lo = at_polar(cir, cir.radius - kRingOffset, phi);
        const Point hi = at_polar(cir, cir.radius + kRingOffset, phi);
        if (next && k == *next && aligned(dest, k, c.params)) {
            const bool lane_free = std::all_of(c.visible.begin(), c.visible.end(), [&](Point q) {
                return distance_to_segment(q, lo, hi) >= 2.0 + kPassGap;
            });
            if (!lane_free || !is_vacant_target(c.params.targets.points[k], c.visible)) return std::nullopt;
            continue;
        }
        const double now = distance_to_segment(c.self, lo, hi);
        const double path = segment_distance(c.self, dest, lo, hi);
        if (path < 2.0 + kPassGap && path < now - 1e-9) return std::nullopt;
    }
    c.note(label);
    return dest;
}

bool aligned(Point p, std::size_t k, const LocalParams& params) {
    const double off = cw_offset(angle_of(p, params.cir), angle_of(params.targets.points[k], params.cir));
    return off <= 1e-9;
}

std::optional<Point> claim(const Ctx& c, std::size_t k, std::string_view label) {
    const Point t = c.params.targets.points[k];
    if (is_vacant_target(t, c.visible) && clear(c.self, t, c.visible)) {
        c.note(std::string(label) + "-claim");
        return t;
    }
    c.note(std::string(label) + "-wait");
    return std::nullopt;
}

// Band robot held up by a deeper robot ahead: climb until it can slide over.
std::optional<Point> band_rise(const Ctx& c, double side, double ring, std::string_view label) {
    const Circle& cir = c.params.cir;
    const auto q = robot_ahead(c.self, ring, cir, c.visible);
    if (!q) return std::nullopt;
    const double r0 = radius_of(c.self, cir);
    const double to = radius_of(*q, cir) - side * (2.0 + 2.0 * kPassGap);
    if ((to - r0) * -side <= 1e-6 || (cir.radius - to) * -side <= kEps) return std::nullopt;
    if (std::abs(to - r0) > hop_limit(c.vis, c.params)) return std::nullopt;
    const Point dest = at_polar(cir, to, angle_of(c.self, cir));
    if (!clear(c.self, dest, c.visible)) return std::nullopt;
    c.note(label);
    return dest;
}

// Last resort for a stuck band robot: cross CIR radially to the opposite ring,
// away from every unfilled claim lane.
std::optional<Point> band_cross(const Ctx& c, double side, std::string_view label) {
    const Circle& cir = c.params.cir;
    const double r0 = radius_of(c.self, cir);
    double to = cir.radius - side * kRingOffset;
    const double limit = hop_limit(c.vis, c.params);
    if (std::abs(to - r0) > limit) to = r0 - side * limit;
    if ((to - cir.radius) * -side < 0.5) return std::nullopt;
    const Point dest = at_polar(cir, to, angle_of(c.self, cir));
    if (!clear(c.self, dest, c.visible)) return std::nullopt;
    const bool room = std::all_of(c.visible.begin(), c.visible.end(), [&](Point q) {
        return radius_of(q, cir) * side > cir.radius * side || distance(q, dest) > kRingLandingClear;
    });
    if (!room) return std::nullopt;
    const auto filled = filled_targets(c.self, c.visible, c.params);
    for (std::size_t k = 0; k < c.params.targets.points.size(); ++k) {
        if (filled[k]) continue;
        const double phi = angle_of(c.params.targets.points[k], cir);
        const Point lo = at_polar(cir, cir.radius - kRingOffset, phi);
        const Point hi = at_polar(cir, cir.radius + kRingOffset, phi);
        if (segment_distance(c.self, dest, lo, hi) < 2.0 + kPassGap) return std::nullopt;
    }
    c.note(label);
    return dest;
}

// Shared inside/outside ring logic: `side` is -1 inside CIR, +1 outside.
std::optional<Point> ring_logic(const Ctx& c, const PsiConfig& psi, double side, std::string_view label) {
    const Circle& cir = c.params.cir;
    const double r0 = radius_of(c.self, cir);
    const double ring = cir.radius + side * kRingOffset;
    if (!psi.target) {
        c.note(std::string(label) + "-no-target");
        return std::nullopt;
    }
    const std::size_t k = *psi.target;
    const bool between = side < 0 ? r0 > ring + kRadiusTol : r0 < ring - kRadiusTol;
    const bool on_ring = std::abs(r0 - ring) <= kRadiusTol;
    if (on_ring) {
        if (aligned(c.self, k, c.params)) return claim(c, k, label);
        return ring_slide(c, k, ring, false, std::string(label) + "-slide");
    }
    if (between) {
        if (aligned(c.self, k, c.params)) return claim(c, k, label);
        const Point down = at_polar(cir, ring, angle_of(c.self, cir));
        if (std::abs(ring - r0) <= hop_limit(c.vis, c.params) && clear(c.self, down, c.visible) &&
            !trapped(down, ring, cir, hop_limit(c.vis, c.params), c.visible)) {
            c.note(std::string(label) + "-stage");
            return down;
        }
        if (auto d = band_slide(c, k, std::string(label) + "-band-slide")) return d;
        if (auto d = band_rise(c, side, ring, std::string(label) + "-band-rise")) return d;
        if (auto d = band_cross(c, side, std::string(label) + "-band-cross")) return d;
        c.note(std::string(label) + "-band-wait");
        return std::nullopt;
    }
    return std::nullopt;
}

}  // namespace

LocalParams LocalParams::make(int n, double rad, Point center) {
    if (n <= 1) throw std::invalid_argument("local params: n must exceed 1");
    if (!(rad > 0.0) || kTwoPi * rad / n < 4.0)
        throw std::invalid_argument("local params: circle too small for n robots (need 2*pi*rad/n >= 4)");
    LocalParams p;
    p.cir = {center, rad};
    p.n = n;
    p.targets = global::compute_target_points(n, p.cir);
    return p;
}

PositionClass compute_robot_position(Point r, const Circle& cir) {
    const double d = distance(r, cir.center);
    if (d <= kEps) return PositionClass::at_center;
    if (std::abs(d - cir.radius) <= kEps) return PositionClass::on_circle;
    return d < cir.radius ? PositionClass::inside : PositionClass::outside;
}

bool eligible_to_move(Point self, std::span<const Point> visible, const Circle& cir) {
    const PositionClass pc = compute_robot_position(self, cir);
    if (pc == PositionClass::at_center || pc == PositionClass::on_circle) return true;
    const double r = radius_of(self, cir);
    for (Point q : visible) {
        const PositionClass qc = compute_robot_position(q, cir);
        const double rq = radius_of(q, cir);
        if (pc == PositionClass::inside && (qc == PositionClass::inside || qc == PositionClass::at_center)) {
            if (r < rq - kRadiusTol) return false;
        }
        if (pc == PositionClass::outside && qc == PositionClass::outside) {
            if (r > rq + kRadiusTol) return false;
        }
    }
    return true;
}

PhiConfig classify_phi(const Circle& vc_i, const Circle& vc_j, Point r_i, Point r_j) {
    const CircleIntersection ix = circle_circle_relation(vc_i, vc_j);
    PhiConfig out;
    out.points = ix.points;
    if (ix.relation == CircleRelation::disjoint) {
        out.kind = Phi::phi1;
        return out;
    }
    if (ix.relation == CircleRelation::externally_tangent) {
        out.kind = Phi::phi2;
        return out;
    }
    const double d = distance(r_i, r_j);
    const bool mutual = vc_i.radius >= d && vc_j.radius >= d;
    out.kind = mutual ? Phi::phi4 : Phi::phi3;
    return out;
}

PsiConfig classify_psi(Point self, double vis_radius, const LocalParams& params,
                       std::span<const Point> visible) {
    const Circle& cir = params.cir;
    PsiConfig out;
    const PositionClass pc = compute_robot_position(self, cir);
    if (pc != PositionClass::at_center) out.h = project_radially(self, cir);
    const auto filled = filled_targets(self, visible, params);
    if (pc != PositionClass::at_center) out.target = next_target(self, filled, params);

    if (settled_at(self, params)) {
        out.kind = Psi::psi1;
        return out;
    }
    if (pc == PositionClass::on_circle) {
        out.kind = Psi::psi0;
        return out;
    }
    if (pc == PositionClass::at_center) {
        out.kind = Psi::psi4;
        return out;
    }

    const bool inside = pc == PositionClass::inside;
    if (out.target && in_band(self, params)) {
        for (Point q : visible) {
            const PositionClass qc = compute_robot_position(q, cir);
            const bool opposite = inside ? qc == PositionClass::outside : qc == PositionClass::inside;
            if (!opposite || !in_band(q, params)) continue;
            if (next_target(q, filled, params) == out.target) {
                out.kind = Psi::psi9;
                out.contender = q;
                return out;
            }
        }
    }

    const CircleIntersection ix = circle_circle_relation({self, vis_radius}, cir);
    if (inside) {
        const bool smaller = vis_radius < cir.radius;
        if (ix.relation == CircleRelation::internally_tangent && smaller) out.kind = Psi::psi2;
        else if (ix.relation == CircleRelation::contained && smaller) out.kind = Psi::psi3;
        else out.kind = Psi::psi5;
    } else {
        if (ix.relation == CircleRelation::disjoint) out.kind = Psi::psi7;
        else if (ix.relation == CircleRelation::externally_tangent) out.kind = Psi::psi6;
        else out.kind = Psi::psi8;
    }
    return out;
}

std::string_view psi_name(Psi p) {
    static constexpr std::string_view names[] = {"psi0", "psi1", "psi2", "psi3", "psi4",
                                                 "psi5", "psi6", "psi7", "psi8", "psi9"};
    return names[static_cast<int>(p)];
}

std::optional<Point> compute_destination(Point self, double vis_radius, const LocalParams& params,
                                         std::span<const Point> visible, std::string* tag) {
    const PsiConfig psi = classify_psi(self, vis_radius, params, visible);
    const Ctx c{self, vis_radius, params, visible, tag};
    const std::string name(psi_name(psi.kind));
    const Circle& cir = params.cir;
    const double r0 = radius_of(self, cir);
    c.note(name);

    switch (psi.kind) {
        case Psi::psi1:
            return std::nullopt;
        case Psi::psi0: {
            const Point out = at_polar(cir, cir.radius + kRingOffset, angle_of(self, cir));
            const bool room = std::all_of(visible.begin(), visible.end(),
                                          [&](Point q) { return distance(q, out) > kRingLandingClear; });
            if (room && clear(self, out, visible)) {
                c.note(name + "-out");
                return out;
            }
            c.note(name + "-wait");
            return std::nullopt;
        }
        case Psi::psi4: {
            const double hop = std::min(vis_radius, hop_limit(vis_radius, params));
            if (hop <= 1e-12) return std::nullopt;
            const Point m = cir.center + Point{hop, 0.0};
            if (is_vacant_target(m, visible) && clear(self, m, visible)) {
                c.note(name + "-axis");
                return m;
            }
            const Point mid = cir.center + Point{0.5 * hop, 0.0};
            if (clear(self, mid, visible)) {
                c.note(name + "-mid");
                return mid;
            }
            c.note(name + "-blocked");
            return std::nullopt;
        }
        case Psi::psi9: {
            // The inside robot keeps its course toward T; the outside one
            // gives way by scanning rightward.
            if (compute_robot_position(self, cir) == PositionClass::inside) {
                auto d = ring_logic(c, psi, -1.0, name + "-advance");
                if (!d) c.note(name + "-advance-wait");
                return d;
            }
            // Scanning happens on the outer ring only; the band in between
            // holds the claim lanes.
            const double ring = cir.radius + kRingOffset;
            if (std::abs(r0 - ring) <= kRadiusTol) return ring_slide(c, psi.target, ring, true, name + "-scan-right");
            const Point up = at_polar(cir, ring, angle_of(self, cir));
            if (std::abs(ring - r0) <= hop_limit(vis_radius, params) && clear(self, up, visible)) {
                c.note(name + "-back-off");
                return up;
            }
            c.note(name + "-back-off-blocked");
            return std::nullopt;
        }
        default:
            break;
    }

    const bool inside = compute_robot_position(self, cir) == PositionClass::inside;
    const double side = inside ? -1.0 : 1.0;
    if (auto d = ring_logic(c, psi, side, name); d || in_band(self, params)) return d;

    const double ring = cir.radius + side * kRingOffset;
    switch (psi.kind) {
        case Psi::psi3:
        case Psi::psi7: {
            const double to = r0 - side * vis_radius;
            const double capped = params.sight_guard ? (inside ? std::min(to, ring) : std::max(to, ring)) : to;
            return radial_to(c, capped, true, name + "-hop");
        }
        case Psi::psi2:
        case Psi::psi6: {
            if (!params.sight_guard) {
                const bool target = std::any_of(params.targets.points.begin(), params.targets.points.end(),
                                                [&](Point t) { return distance(t, psi.h) <= kEps; });
                if (target && is_vacant_target(psi.h, visible) && clear(self, psi.h, visible)) {
                    c.note(name + "-touch");
                    return psi.h;
                }
                // Literal midpoint; touching a robot at h is not a collision.
                const Point m = midpoint(self, psi.h);
                if (is_clear_motion(self, m, visible, 2.0 - 2.0 * kEps)) {
                    c.note(name + "-mid");
                    return m;
                }
            }
            const double mid = 0.5 * (r0 + cir.radius);
            const double capped = !params.sight_guard ? mid : inside ? std::min(mid, ring) : std::max(mid, ring);
            return radial_to(c, capped, false, name + "-mid");
        }
        default:
            return radial_to(c, ring, false, name + "-stage");
    }
}

Action local_step(const Snapshot& snap, const LocalParams& params) {
    const std::span<const Point> visible(snap.others);
    if (!eligible_to_move(snap.self, visible, params.cir)) return Action::stay("ineligible");
    std::string tag;
    const auto dest = compute_destination(snap.self, snap.vis_radius, params, visible, &tag);
    if (!dest) return Action::stay(tag);
    return Action::move_to(*dest, tag);
}

Algorithm make_algorithm(const LocalParams& params) {
    return [params](const Snapshot& snap) { return local_step(snap, params); };
}

bool satisfies_constraint2(Point from, Point to, Point c, double ang_tol) {
    const Point d = to - from;
    const double len = norm(d);
    if (len <= 1e-12) return true;
    const Point rel = from - c;
    const double r = norm(rel);
    if (r <= kEps) return true;
    // Radial: displacement parallel to the C -> from ray.
    if (std::abs(cross(rel, d)) <= std::sin(ang_tol) * r * len) return true;
    const Point rel_to = to - c;
    if (std::abs(norm(rel_to) - r) > ang_tol * std::max(1.0, r)) return false;
    return cross(rel, rel_to) < 0.0 || (cross(rel, rel_to) == 0.0 && dot(rel, rel_to) < 0.0);
}

bool is_formed(std::span<const Point> centers, const LocalParams& params) {
    const auto& ts = params.targets.points;
    if (centers.size() != ts.size()) return false;
    std::vector<bool> used(ts.size(), false);
    for (Point p : centers) {
        bool hit = false;
        for (std::size_t k = 0; k < ts.size() && !hit; ++k)
            if (!used[k] && distance(p, ts[k]) <= kSettled) {
                used[k] = true;
                hit = true;
            }
        if (!hit) return false;
    }
    return true;
}

}  // namespace ucircle::local
