#pragma once

// Data-parallel kernels. Each kernel has a serial reference used by the tests
// and an OpenMP variant used by the simulator; both return identical results
// (ties are broken lexicographically, never by thread order).

#include "ucircle/geometry.hpp"

#include <cstddef>
#include <functional>
#include <limits>
#include <span>

namespace ucircle::kernels {

struct PairMinimum {
    double distance = std::numeric_limits<double>::infinity();
    std::size_t first = 0;
    std::size_t second = 0;
};

/// Minimum center distance over all pairs of concurrent motions.
PairMinimum min_pairwise_separation_serial(std::span<const MotionSegment> motions);
PairMinimum min_pairwise_separation(std::span<const MotionSegment> motions);

/// O(n^4) smallest enclosing circle: every pair-diameter and triple
/// circumcircle that encloses all points, smallest radius wins.
Circle sec_brute_force_serial(std::span<const Point> points);
Circle sec_brute_force(std::span<const Point> points);

/// Runs body(i) for i in [0, count) on up to `jobs` threads.
void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& body);

/// Number of worker threads the OpenMP runtime would use (1 without OpenMP).
int max_threads();

}  // namespace ucircle::kernels
