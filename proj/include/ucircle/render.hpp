#pragma once

// SVG snapshots of a run: target circle (or SEC), target points, robot discs
// and visibility circles.

#include "ucircle/sim.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ucircle::render {

struct FrameStyle {
    int n = 0;
    std::optional<Circle> cir;  // fixed circle (local runs); SEC is drawn when empty
};

struct Frame {
    std::string name;  // e.g. frame_000010.svg
    long cycle = 0;
    std::string svg;
};

/// Frames at cycles 0, k, 2k, ... plus the final state. Positions at cycle c
/// apply every move issued before c. Throws std::invalid_argument if k < 1.
std::vector<Frame> render_frames(const Trace& trace, long every_k, const FrameStyle& style);

std::string render_svg(const std::vector<RobotState>& robots, const FrameStyle& style, const Circle& view,
                       const std::string& caption);

}  // namespace ucircle::render
