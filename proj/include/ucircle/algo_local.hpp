#pragma once

// Uniform circle formation with limited visibility, asynchronous activation
// and a common coordinate frame whose origin is the center C of the circle to
// form. Per-robot visibility radii are taken from the snapshot, so the same
// code serves uniform and non-uniform ranges.

#include "ucircle/algo_global.hpp"
#include "ucircle/geometry.hpp"
#include "ucircle/sim.hpp"

#include <optional>
#include <span>
#include <string>

namespace ucircle::local {

// Robots stage and slide on the rings rad - kRingOffset (inside) and
// rad + kRingOffset (outside); claims are radial hops from a ring.
inline constexpr double kRingOffset = 2.5;
// Chord of one rightward slide step.
inline constexpr double kSlotChord = 2.5;

struct LocalParams {
    Circle cir;
    int n = 0;
    global::TargetSet targets;
    // Clip every hop to (vis_radius - 2) / 2 so that no robot can land next
    // to a robot it could not see. Off reproduces the literal hop lengths.
    bool sight_guard = true;

    /// Throws std::invalid_argument unless n > 1 and 2*pi*rad/n >= 4.
    static LocalParams make(int n, double rad, Point center = {0.0, 0.0});
};

enum class PositionClass { inside, on_circle, outside, at_center };

PositionClass compute_robot_position(Point r, const Circle& cir);

/// Constraint 1 over the visible robots (conjunction of the per-robot bullets).
bool eligible_to_move(Point self, std::span<const Point> visible, const Circle& cir);

enum class Phi { phi1, phi2, phi3, phi4 };

struct PhiConfig {
    Phi kind = Phi::phi1;
    std::vector<Point> points;  // touch point (phi2) or the two crossing points (phi3/phi4)
};

PhiConfig classify_phi(const Circle& vc_i, const Circle& vc_j, Point r_i, Point r_j);

enum class Psi { psi0, psi1, psi2, psi3, psi4, psi5, psi6, psi7, psi8, psi9 };

struct PsiConfig {
    Psi kind = Psi::psi3;
    Point h;                                // radial projection of self onto CIR
    std::optional<std::size_t> target;      // next unfilled target clockwise
    std::optional<Point> contender;         // psi9 counterpart across CIR
};

PsiConfig classify_psi(Point self, double vis_radius, const LocalParams& params,
                       std::span<const Point> visible);

std::string_view psi_name(Psi p);

/// Destination in the common frame, or nullopt to stay. `tag` receives the
/// psi label plus the sub-rule taken.
std::optional<Point> compute_destination(Point self, double vis_radius, const LocalParams& params,
                                         std::span<const Point> visible, std::string* tag = nullptr);

Action local_step(const Snapshot& snap, const LocalParams& params);

Algorithm make_algorithm(const LocalParams& params);

/// Radial (toward or away from C) or a clockwise move that keeps the
/// distance to C, within `ang_tol` radians.
bool satisfies_constraint2(Point from, Point to, Point c, double ang_tol = 1e-9);

/// Every robot within 1e-6 of a distinct target of CIR.
bool is_formed(std::span<const Point> centers, const LocalParams& params);

}  // namespace ucircle::local
