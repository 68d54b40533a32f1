#include "ucircle/geometry.hpp"

#include <algorithm>
#include <limits>
#include <numbers>

namespace ucircle {

Corridor::Corridor(Point src, Point dst, double half_width)
    : src_(src), dst_(dst), half_width_(half_width) {
    if (src == dst) throw std::invalid_argument("corridor: src and dst coincide");
    if (!(half_width > 0.0)) throw std::invalid_argument("corridor: half width must be positive");
}

double Corridor::distance_to(Point p) const {
    const double len = length();
    const Point axis = (1.0 / len) * (dst_ - src_);
    const Point rel = p - src_;
    const double along = dot(rel, axis);
    const double across = cross(axis, rel);
    const double dx = std::max(0.0, std::abs(along - 0.5 * len) - 0.5 * len);
    const double dy = std::max(0.0, std::abs(across) - half_width_);
    return std::hypot(dx, dy);
}

Point MotionSegment::position_at(double t) const {
    if (t1 <= t0 || t >= t1) return end;
    if (t <= t0) return start;
    const double f = (t - t0) / (t1 - t0);
    return start + f * (end - start);
}

Circle circle_from(Point a, Point b) {
    return {midpoint(a, b), 0.5 * distance(a, b)};
}

Circle circle_from(Point a, Point b, Point c) {
    const Point ab = b - a;
    const Point ac = c - a;
    const double d = 2.0 * cross(ab, ac);
    const double scale = std::max({norm(ab), norm(ac), 1.0});
    if (std::abs(d) <= 1e-14 * scale * scale) {
        // Collinear: the extreme pair spans the circle.
        Circle best = circle_from(a, b);
        for (const Circle& cand : {circle_from(a, c), circle_from(b, c)})
            if (cand.radius > best.radius) best = cand;
        return best;
    }
    const double ab2 = dot(ab, ab);
    const double ac2 = dot(ac, ac);
    const Point off{(ac.y * ab2 - ab.y * ac2) / d, (ab.x * ac2 - ac.x * ab2) / d};
    return {a + off, norm(off)};
}

namespace {

bool inside(const Circle& c, Point p) {
    return distance(c.center, p) <= c.radius + 1e-12 * std::max(1.0, c.radius);
}

}  // namespace

Circle smallest_enclosing_circle(std::span<const Point> points) {
    if (points.empty()) throw std::invalid_argument("smallest_enclosing_circle: empty point set");
    const std::size_t n = points.size();
    Circle c{points[0], 0.0};
    for (std::size_t i = 1; i < n; ++i) {
        if (inside(c, points[i])) continue;
        c = {points[i], 0.0};
        for (std::size_t j = 0; j < i; ++j) {
            if (inside(c, points[j])) continue;
            c = circle_from(points[i], points[j]);
            for (std::size_t k = 0; k < j; ++k) {
                if (inside(c, points[k])) continue;
                c = circle_from(points[i], points[j], points[k]);
            }
        }
    }
    return c;
}

bool is_free_path(const Corridor& corridor, std::span<const Point> obstacles) {
    // Closed sets on both sides: grazing the corridor edge blocks it.
    return std::none_of(obstacles.begin(), obstacles.end(), [&](Point o) {
        return corridor.distance_to(o) <= kBodyRadius;
    });
}

bool is_vacant_target(Point p, std::span<const Point> robots) {
    constexpr double kClear = 2.0 + kBodyRadius;
    return std::all_of(robots.begin(), robots.end(),
                       [&](Point r) { return distance(p, r) > kClear + kEps; });
}

double distance_to_segment(Point p, Point a, Point b) {
    const Point ab = b - a;
    const double len2 = dot(ab, ab);
    if (len2 == 0.0) return distance(p, a);
    const double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
    return distance(p, a + t * ab);
}

bool is_clear_motion(Point src, Point dst, std::span<const Point> obstacles, double clearance) {
    return std::all_of(obstacles.begin(), obstacles.end(), [&](Point o) {
        return distance_to_segment(o, src, dst) >= clearance + kEps;
    });
}

Point project_radially(Point p, const Circle& target) {
    const Point rel = p - target.center;
    const double len = norm(rel);
    if (len <= kEps) throw DegenerateProjection("project_radially: point coincides with center");
    return target.center + (target.radius / len) * rel;
}

CircleIntersection circle_circle_relation(const Circle& a, const Circle& b) {
    CircleIntersection out;
    const double d = distance(a.center, b.center);
    const double sum = a.radius + b.radius;
    const double diff = std::abs(a.radius - b.radius);
    const Point axis = d > 0.0 ? (1.0 / d) * (b.center - a.center) : Point{1.0, 0.0};

    if (std::abs(d - sum) <= kEps) {
        out.relation = CircleRelation::externally_tangent;
        out.points.push_back(a.center + a.radius * axis);
    } else if (d > sum) {
        out.relation = CircleRelation::disjoint;
    } else if (d > kEps && std::abs(d - diff) <= kEps) {
        out.relation = CircleRelation::internally_tangent;
        const double sign = a.radius >= b.radius ? 1.0 : -1.0;
        out.points.push_back(a.center + (sign * a.radius) * axis);
    } else if (d < diff) {
        out.relation = CircleRelation::contained;
    } else {
        out.relation = CircleRelation::two_intersections;
        const double along = (d * d + a.radius * a.radius - b.radius * b.radius) / (2.0 * d);
        const double h = std::sqrt(std::max(0.0, a.radius * a.radius - along * along));
        const Point base = a.center + along * axis;
        const Point perp{-axis.y, axis.x};
        out.points.push_back(base + h * perp);
        out.points.push_back(base - h * perp);
    }
    return out;
}

double min_separation_during_motion(const MotionSegment& m1, const MotionSegment& m2) {
    const double lo = std::max(m1.t0, m2.t0);
    const double hi = std::min(m1.t1, m2.t1);
    if (lo > hi) return std::numeric_limits<double>::infinity();

    const Point d_lo = m1.position_at(lo) - m2.position_at(lo);
    const Point d_hi = m1.position_at(hi) - m2.position_at(hi);
    const double span = hi - lo;
    if (span <= 0.0) return norm(d_lo);

    // Relative motion is linear on the window; minimize |d_lo + s (d_hi - d_lo)|.
    const Point dv = d_hi - d_lo;
    const double vv = dot(dv, dv);
    double best = std::min(norm(d_lo), norm(d_hi));
    if (vv > 0.0) {
        const double s = -dot(d_lo, dv) / vv;
        if (s > 0.0 && s < 1.0) best = std::min(best, norm(d_lo + s * dv));
    }
    return best;
}

Point point_on_circle_at_arc(const Circle& c, Point from, double arc_len, Direction dir) {
    if (!(c.radius > 0.0)) throw std::invalid_argument("point_on_circle_at_arc: zero radius");
    if (!c.on_boundary(from, kEps * std::max(1.0, c.radius)))
        throw std::invalid_argument("point_on_circle_at_arc: start point is off the circle");
    const double angle = arc_len / c.radius;
    const double signed_angle = dir == Direction::ccw ? angle : -angle;
    return c.center + rotate(from - c.center, signed_angle);
}

}  // namespace ucircle
