#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

namespace ucircle {

// Single tolerance used by every geometric predicate.
inline constexpr double kEps = 1e-9;

// Robot body radius; robots are closed unit discs.
inline constexpr double kBodyRadius = 1.0;

struct Point {
    double x = 0.0;
    double y = 0.0;

    friend Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
    friend Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
    friend Point operator*(double s, Point p) { return {s * p.x, s * p.y}; }
    friend Point operator*(Point p, double s) { return {s * p.x, s * p.y}; }
    friend bool operator==(Point a, Point b) = default;
};

inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point p) { return std::hypot(p.x, p.y); }
inline double distance(Point a, Point b) { return norm(a - b); }
inline Point midpoint(Point a, Point b) { return {0.5 * (a.x + b.x), 0.5 * (a.y + b.y)}; }
inline bool is_finite(Point p) { return std::isfinite(p.x) && std::isfinite(p.y); }

/// Rotates `p` about the origin by `angle` radians (counter-clockwise positive).
inline Point rotate(Point p, double angle) {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    return {c * p.x - s * p.y, s * p.x + c * p.y};
}

struct Circle {
    Point center;
    double radius = 0.0;

    bool contains(Point p, double tol = kEps) const { return distance(center, p) <= radius + tol; }
    bool on_boundary(Point p, double tol = kEps) const {
        return std::abs(distance(center, p) - radius) <= tol;
    }
};

/// Rectangle of total width 2 swept along src -> dst (the "free path" region).
class Corridor {
public:
    Corridor(Point src, Point dst, double half_width = 1.0);

    Point src() const { return src_; }
    Point dst() const { return dst_; }
    double half_width() const { return half_width_; }
    double length() const { return distance(src_, dst_); }

    /// Euclidean distance from `p` to the closed rectangle (0 when inside).
    double distance_to(Point p) const;

private:
    Point src_;
    Point dst_;
    double half_width_;
};

/// Straight rigid motion from `start` (at t0) to `end` (at t1) at constant speed.
struct MotionSegment {
    Point start;
    Point end;
    double t0 = 0.0;
    double t1 = 0.0;

    double speed() const { return t1 > t0 ? distance(start, end) / (t1 - t0) : 0.0; }
    Point position_at(double t) const;
};

enum class Direction { cw, ccw };

enum class CircleRelation {
    disjoint,
    externally_tangent,
    two_intersections,
    internally_tangent,
    contained,
};

struct CircleIntersection {
    CircleRelation relation = CircleRelation::disjoint;
    std::vector<Point> points;
};

/// Thrown by project_radially when the point coincides with the circle center.
class DegenerateProjection : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

Circle circle_from(Point a, Point b);
Circle circle_from(Point a, Point b, Point c);

/// Minimum-radius circle containing every point (move-to-front incremental
/// construction). Throws std::invalid_argument on empty input.
Circle smallest_enclosing_circle(std::span<const Point> points);

/// True iff no obstacle disc (radius 1) touches the closed corridor rectangle.
bool is_free_path(const Corridor& corridor, std::span<const Point> obstacles);

/// True iff no robot disc reaches into the radius-2 disc around `p`,
/// i.e. every center is farther than 3 (+eps) from `p`.
bool is_vacant_target(Point p, std::span<const Point> robots);

/// Swept-disc clearance: a unit disc moving src -> dst stays at least
/// `clearance` (center to center) from every obstacle center.
bool is_clear_motion(Point src, Point dst, std::span<const Point> obstacles, double clearance = 2.0);

/// Point on `target`'s circumference along the ray center -> p.
Point project_radially(Point p, const Circle& target);

CircleIntersection circle_circle_relation(const Circle& a, const Circle& b);

/// Exact minimum center distance over the common time window; +inf when the
/// windows do not overlap.
double min_separation_during_motion(const MotionSegment& m1, const MotionSegment& m2);

/// Walks `arc_len` along the circumference from `from`. Throws
/// std::invalid_argument when `from` is off the circle or the radius is zero.
Point point_on_circle_at_arc(const Circle& c, Point from, double arc_len, Direction dir);

/// Distance from p to segment [a, b].
double distance_to_segment(Point p, Point a, Point b);

}  // namespace ucircle
