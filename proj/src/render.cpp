#include "ucircle/render.hpp"

#include "ucircle/algo_global.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace ucircle::render {

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

std::string circle_el(Point c, double r, const std::string& attrs) {
    return "<circle cx=\"" + num(c.x) + "\" cy=\"" + num(-c.y) + "\" r=\"" + num(r) + "\" " + attrs + "/>\n";
}

Circle view_of(const Trace& trace, const FrameStyle& style) {
    std::vector<Point> pts = trace.initial.centers();
    for (const auto& e : trace.events)
        if (e.destination) pts.push_back(*e.destination);
    for (const auto& r : trace.final_world.robots) pts.push_back(r.center);
    if (style.cir) {
        pts.push_back(style.cir->center + Point{style.cir->radius, 0.0});
        pts.push_back(style.cir->center - Point{style.cir->radius, 0.0});
        pts.push_back(style.cir->center + Point{0.0, style.cir->radius});
        pts.push_back(style.cir->center - Point{0.0, style.cir->radius});
    }
    if (pts.empty()) return {{0.0, 0.0}, 10.0};
    Circle c = smallest_enclosing_circle(pts);
    c.radius += 3.0;
    return c;
}

}  // namespace

std::string render_svg(const std::vector<RobotState>& robots, const FrameStyle& style, const Circle& view,
                       const std::string& caption) {
    const double x0 = view.center.x - view.radius;
    const double y0 = -view.center.y - view.radius;
    const double side = 2.0 * view.radius;
    std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" + num(x0) + " " + num(y0) + " " +
                      num(side) + " " + num(side) + "\" width=\"640\" height=\"640\">\n";
    out += "<rect x=\"" + num(x0) + "\" y=\"" + num(y0) + "\" width=\"" + num(side) + "\" height=\"" + num(side) +
           "\" fill=\"white\"/>\n";

    std::optional<Circle> ring = style.cir;
    if (!ring && !robots.empty()) {
        std::vector<Point> c;
        for (const auto& r : robots) c.push_back(r.center);
        ring = smallest_enclosing_circle(c);
    }
    const double stroke = std::max(0.05, side / 600.0);
    if (ring) {
        out += circle_el(ring->center, ring->radius,
                         "fill=\"none\" stroke=\"#555\" stroke-width=\"" + num(stroke) + "\"");
        if (style.n > 0 && ring->radius > 0.0) {
            for (Point t : global::compute_target_points(style.n, *ring).points)
                out += circle_el(t, 0.25, "fill=\"#c33\"");
        }
    }
    for (const auto& r : robots) {
        if (std::isfinite(r.vis_radius))
            out += circle_el(r.center, r.vis_radius,
                             "fill=\"none\" stroke=\"#9bd\" stroke-dasharray=\"0.6 0.6\" stroke-width=\"" +
                                 num(stroke) + "\"");
    }
    for (const auto& r : robots) {
        out += circle_el(r.center, r.body_radius,
                         "fill=\"#36c\" fill-opacity=\"0.7\" stroke=\"#123\" stroke-width=\"" + num(stroke) + "\"");
    }
    out += "<text x=\"" + num(x0 + 0.5) + "\" y=\"" + num(y0 + side * 0.04) + "\" font-size=\"" + num(side * 0.03) +
           "\">" + caption + "</text>\n";
    out += "</svg>\n";
    return out;
}

std::vector<Frame> render_frames(const Trace& trace, long every_k, const FrameStyle& style) {
    if (every_k < 1) throw std::invalid_argument("render_frames: k must be at least 1");
    const Circle view = view_of(trace, style);
    std::vector<Frame> frames;
    std::vector<RobotState> robots = trace.initial.robots;

    const auto emit = [&](long cycle, const std::vector<RobotState>& rs, const std::string& label) {
        char name[48];
        std::snprintf(name, sizeof name, "frame_%06ld.svg", cycle);
        frames.push_back({name, cycle, render_svg(rs, style, view, label)});
    };

    std::size_t next_event = 0;
    const auto apply_until = [&](long cycle) {
        while (next_event < trace.events.size() && trace.events[next_event].cycle < cycle) {
            const auto& e = trace.events[next_event++];
            if (e.phase != Phase::move || !e.destination) continue;
            for (auto& r : robots)
                if (r.id == e.robot) r.center = *e.destination;
        }
    };

    emit(0, robots, "cycle 0");
    for (long c = every_k; c < trace.cycles_used; c += every_k) {
        apply_until(c);
        emit(c, robots, "cycle " + std::to_string(c));
    }
    if (trace.cycles_used > 0) {
        std::vector<RobotState> fin = trace.final_world.robots;
        char name[48];
        std::snprintf(name, sizeof name, "frame_%06ld_final.svg", trace.cycles_used);
        frames.push_back({name, trace.cycles_used,
                          render_svg(fin, style, view, "final, cycle " + std::to_string(trace.cycles_used))});
    }
    return frames;
}

}  // namespace ucircle::render
