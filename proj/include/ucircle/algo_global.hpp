#pragma once

// Uniform circle formation with unlimited visibility, semi-synchronous
// activation and agreement on the Y axis only. Every function here is a pure
// map from a snapshot (robot-local frame) to an action.

#include "ucircle/geometry.hpp"
#include "ucircle/sim.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ucircle::global {

struct GlobalParams {
    int n = 0;
    double a = 0.0;
    double rad_req = 0.0;

    /// Validates n > 1 and a > 3; throws std::invalid_argument otherwise.
    static GlobalParams make(int n, double a);
};

double compute_radius(double a, int n);

struct SymmetryCase {
    enum class Kind { case1, case2, no_leader };
    Kind kind = Kind::no_leader;
    Point leader1;  // Case1 leader, or the Case2 leader with larger local x
    Point leader2;  // Case2 only
};

/// Leader election among on-SEC points, in the caller's frame. Ties in Y are
/// broken by distance to the vertical line L (closer wins), then by local x.
SymmetryCase detect_symmetry(std::span<const Point> on_sec, const Circle& sec);

struct TargetSet {
    std::vector<Point> points;  // points[0] on top of the circle, then clockwise
    Point anchor;
};

TargetSet compute_target_points(int n, const Circle& sec);

/// Destination for `leader` during expansion (radial if the antipode is
/// occupied, otherwise the point q at distance 2*rad_req from the farthest
/// robot, with the fallbacks described in the README). `points` includes the
/// leader. Returns the mover index into `points` and its destination.
struct ExpansionMove {
    std::size_t mover = 0;
    Point destination;
    std::string tag;
};
std::optional<ExpansionMove> expansion_move(std::span<const Point> points, std::size_t leader,
                                            const Circle& sec, const GlobalParams& params,
                                            bool mirrored_pair = false);

Action sec_expansion(const Snapshot& snap, const GlobalParams& params);
Action form_ucircle(const Snapshot& snap, const GlobalParams& params);
Action global_step(const Snapshot& snap, const GlobalParams& params);

Algorithm make_algorithm(const GlobalParams& params);

/// Every robot within 1e-6 of a distinct target of the current SEC, and the
/// SEC radius at least rad_req.
bool is_formed(std::span<const Point> centers, const GlobalParams& params);

}  // namespace ucircle::global
