#include "ucircle/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ucircle::kernels {

namespace {

bool better(const PairMinimum& a, const PairMinimum& b) {
    if (a.distance != b.distance) return a.distance < b.distance;
    if (a.first != b.first) return a.first < b.first;
    return a.second < b.second;
}

struct CandidateCircle {
    Circle circle{{0.0, 0.0}, std::numeric_limits<double>::infinity()};
    std::size_t rank = std::numeric_limits<std::size_t>::max();
};

bool encloses_all(const Circle& c, std::span<const Point> points) {
    const double tol = 1e-10 * std::max(1.0, c.radius);
    for (Point p : points)
        if (distance(c.center, p) > c.radius + tol) return false;
    return true;
}

// Enumeration rank i*n*n + j*n + k (k == j for pair circles) keeps the
// reduction order-independent.
CandidateCircle candidate_for(std::span<const Point> pts, std::size_t i, std::size_t j,
                              std::size_t k) {
    const std::size_t n = pts.size();
    CandidateCircle out;
    const Circle c = (k == j) ? circle_from(pts[i], pts[j]) : circle_from(pts[i], pts[j], pts[k]);
    if (encloses_all(c, pts)) {
        out.circle = c;
        out.rank = (i * n + j) * n + k;
    }
    return out;
}

void keep_best(CandidateCircle& best, const CandidateCircle& cand) {
    if (cand.rank == std::numeric_limits<std::size_t>::max()) return;
    const double rb = best.circle.radius;
    const double rc = cand.circle.radius;
    const double tol = 1e-12 * std::max(1.0, rc);
    if (rc < rb - tol || (std::abs(rc - rb) <= tol && cand.rank < best.rank)) best = cand;
}

}  // namespace

PairMinimum min_pairwise_separation_serial(std::span<const MotionSegment> motions) {
    PairMinimum best;
    for (std::size_t i = 0; i < motions.size(); ++i) {
        for (std::size_t j = i + 1; j < motions.size(); ++j) {
            const PairMinimum cand{min_separation_during_motion(motions[i], motions[j]), i, j};
            if (better(cand, best)) best = cand;
        }
    }
    return best;
}

PairMinimum min_pairwise_separation(std::span<const MotionSegment> motions) {
#ifdef _OPENMP
    const auto n = static_cast<std::ptrdiff_t>(motions.size());
    // Small swarms are cheaper serially than spinning up a team.
    if (n < 48) return min_pairwise_separation_serial(motions);
    PairMinimum best;
#pragma omp parallel
    {
        PairMinimum local;
#pragma omp for schedule(dynamic, 4) nowait
        for (std::ptrdiff_t i = 0; i < n; ++i) {
            for (std::ptrdiff_t j = i + 1; j < n; ++j) {
                const PairMinimum cand{min_separation_during_motion(motions[i], motions[j]),
                                       static_cast<std::size_t>(i), static_cast<std::size_t>(j)};
                if (better(cand, local)) local = cand;
            }
        }
#pragma omp critical
        if (better(local, best)) best = local;
    }
    return best;
#else
    return min_pairwise_separation_serial(motions);
#endif
}

Circle sec_brute_force_serial(std::span<const Point> points) {
    if (points.empty()) throw std::invalid_argument("sec_brute_force: empty point set");
    if (points.size() == 1) return {points[0], 0.0};
    const std::size_t n = points.size();
    CandidateCircle best;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            keep_best(best, candidate_for(points, i, j, j));
            for (std::size_t k = j + 1; k < n; ++k) keep_best(best, candidate_for(points, i, j, k));
        }
    return best.circle;
}

Circle sec_brute_force(std::span<const Point> points) {
#ifdef _OPENMP
    if (points.size() < 24) return sec_brute_force_serial(points);
    const auto n = static_cast<std::ptrdiff_t>(points.size());
    CandidateCircle best;
#pragma omp parallel
    {
        CandidateCircle local;
#pragma omp for schedule(dynamic, 1) nowait
        for (std::ptrdiff_t i = 0; i < n; ++i)
            for (std::ptrdiff_t j = i + 1; j < n; ++j) {
                const auto ui = static_cast<std::size_t>(i);
                const auto uj = static_cast<std::size_t>(j);
                keep_best(local, candidate_for(points, ui, uj, uj));
                for (std::size_t k = uj + 1; k < points.size(); ++k)
                    keep_best(local, candidate_for(points, ui, uj, k));
            }
#pragma omp critical
        keep_best(best, local);
    }
    return best.circle;
#else
    return sec_brute_force_serial(points);
#endif
}

void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& body) {
#ifdef _OPENMP
    const auto n = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(dynamic, 1) num_threads(jobs > 0 ? jobs : 1)
    for (std::ptrdiff_t i = 0; i < n; ++i) body(static_cast<std::size_t>(i));
#else
    (void)jobs;
    for (std::size_t i = 0; i < count; ++i) body(i);
#endif
}

int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

}  // namespace ucircle::kernels
