#include "doctest.h"

#include "ucircle/kernels.hpp"

#include <atomic>
#include <random>
#include <vector>

using namespace ucircle;

namespace {

std::vector<MotionSegment> random_motions(std::mt19937_64& rng, int n) {
    std::uniform_real_distribution<double> u(-30, 30), t(0, 3);
    std::vector<MotionSegment> out;
    for (int i = 0; i < n; ++i) {
        const double t0 = t(rng);
        out.push_back({{u(rng), u(rng)}, {u(rng), u(rng)}, t0, t0 + 1 + t(rng)});
    }
    return out;
}

}  // namespace

TEST_CASE("parallel pair minimum equals the serial reference") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 40; ++trial) {
        const auto m = random_motions(rng, 2 + trial % 30);
        const auto s = kernels::min_pairwise_separation_serial(m);
        const auto p = kernels::min_pairwise_separation(m);
        CHECK(s.distance == p.distance);
        CHECK(s.first == p.first);
        CHECK(s.second == p.second);
        // Brute force over pairs.
        double best = INFINITY;
        for (std::size_t i = 0; i < m.size(); ++i)
            for (std::size_t j = i + 1; j < m.size(); ++j) best = std::min(best, min_separation_during_motion(m[i], m[j]));
        CHECK(s.distance == best);
    }
}

TEST_CASE("pair minimum of fewer than two motions is infinite") {
    CHECK(std::isinf(kernels::min_pairwise_separation({}).distance));
    const std::vector<MotionSegment> one = {{{0, 0}, {1, 0}, 0, 1}};
    CHECK(std::isinf(kernels::min_pairwise_separation(one).distance));
}

TEST_CASE("parallel brute-force circle equals the serial reference") {
    std::mt19937_64 rng(22);
    std::uniform_real_distribution<double> u(-100, 100);
    for (int trial = 0; trial < 60; ++trial) {
        std::vector<Point> pts;
        for (int i = 0; i < 1 + trial % 12; ++i) pts.push_back({u(rng), u(rng)});
        const Circle s = kernels::sec_brute_force_serial(pts);
        const Circle p = kernels::sec_brute_force(pts);
        CHECK(s.center == p.center);
        CHECK(s.radius == p.radius);
    }
}

TEST_CASE("parallel_for visits every index once") {
    for (int jobs : {1, 2, 4}) {
        std::vector<std::atomic<int>> hits(257);
        kernels::parallel_for(hits.size(), jobs, [&](std::size_t i) { hits[i]++; });
        for (const auto& h : hits) CHECK(h.load() == 1);
    }
    CHECK(kernels::max_threads() >= 1);
}
