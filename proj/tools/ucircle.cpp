#include "ucircle/harness.hpp"
#include "ucircle/kernels.hpp"
#include "ucircle/render.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <vector>

namespace fs = std::filesystem;
using namespace ucircle;

namespace {

void write_file(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

render::FrameStyle style_for(const harness::ScenarioConfig& cfg) {
    render::FrameStyle s;
    s.n = cfg.n;
    if (cfg.algorithm != harness::AlgorithmKind::global) s.cir = Circle{{0.0, 0.0}, cfg.rad};
    return s;
}

int cmd_run(const std::string& config, const std::string& trace_path, const std::string& frames_dir, long every,
            const std::string& summary_path) {
    harness::ScenarioConfig cfg;
    try {
        cfg = harness::load_config(config);
    } catch (const harness::ConfigError& e) {
        std::cerr << "invalid config: " << e.what() << '\n';
        return harness::kExitConfig;
    }
    harness::RunResult res;
    try {
        res = harness::run_scenario(cfg);
    } catch (const harness::ConfigError& e) {
        std::cerr << "invalid config: " << e.what() << '\n';
        return harness::kExitConfig;
    }
    if (!trace_path.empty()) write_file(trace_path, serialize_trace(res.trace));
    if (!frames_dir.empty()) {
        fs::create_directories(frames_dir);
        for (const auto& f : render::render_frames(res.trace, every, style_for(cfg)))
            write_file(fs::path(frames_dir) / f.name, f.svg);
    }
    const std::string summary = harness::summary_json(res.summary);
    if (!summary_path.empty()) write_file(summary_path, summary + "\n");
    std::cout << summary << '\n';
    return harness::exit_code(res.summary.outcome);
}

int cmd_batch(const std::string& configs, const std::string& out_dir, int jobs) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(configs))
        if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    fs::create_directories(out_dir);

    std::vector<int> codes(files.size(), 0);
    std::vector<std::string> lines(files.size());
    kernels::parallel_for(files.size(), jobs, [&](std::size_t i) {
        const std::string stem = files[i].stem().string();
        const fs::path base = fs::path(out_dir) / stem;
        try {
            const auto cfg = harness::load_config(files[i]);
            const auto res = harness::run_scenario(cfg);
            write_file(base.string() + ".trace.jsonl", serialize_trace(res.trace));
            const std::string summary = harness::summary_json(res.summary);
            write_file(base.string() + ".summary.json", summary + "\n");
            codes[i] = harness::exit_code(res.summary.outcome);
            lines[i] = stem + " " + std::string(harness::summary_outcome_name(res.summary.outcome));
        } catch (const harness::ConfigError& e) {
            codes[i] = harness::kExitConfig;
            lines[i] = stem + " invalid-config: " + e.what();
            try {
                write_file(base.string() + ".summary.json",
                           nlohmann::json{{"outcome", "invalid-config"}, {"error", e.what()}}.dump() + "\n");
            } catch (...) {
            }
        } catch (const std::exception& e) {
            codes[i] = 3;
            lines[i] = stem + " error: " + e.what();
        }
    });
    for (const auto& l : lines) std::cout << l << '\n';
    return codes.empty() ? 0 : *std::max_element(codes.begin(), codes.end());
}

int cmd_oracle_sec(const std::string& points_file) {
    std::ifstream in(points_file);
    if (!in) {
        std::cerr << "cannot open " << points_file << '\n';
        return 1;
    }
    std::vector<Point> pts;
    try {
        const auto j = nlohmann::json::parse(in);
        if (!j.is_array()) throw std::invalid_argument("expected a JSON array of [x, y] pairs");
        for (const auto& p : j) {
            if (!p.is_array() || p.size() != 2) throw std::invalid_argument("expected [x, y] pairs");
            pts.push_back({p[0].get<double>(), p[1].get<double>()});
        }
        if (pts.empty()) throw std::invalid_argument("no points");
    } catch (const std::exception& e) {
        std::cerr << "invalid points file: " << e.what() << '\n';
        return 1;
    }
    const Circle brute = kernels::sec_brute_force(pts);
    const Circle inc = smallest_enclosing_circle(pts);
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "{\"center\":[%.17g,%.17g],\"radius\":%.17g,\"incremental\":{\"center\":[%.17g,%.17g],\"radius\":%.17g}}",
                  brute.center.x, brute.center.y, brute.radius, inc.center.x, inc.center.y, inc.radius);
    std::cout << buf << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Uniform circle formation simulator for fat oblivious robots"};
    app.require_subcommand(1);

    std::string config, trace_path, frames_dir, summary_path;
    long every = 10;
    auto* run = app.add_subcommand("run", "Run one scenario");
    run->add_option("--config", config, "Scenario JSON file")->required();
    run->add_option("--trace", trace_path, "Write the JSONL trace here");
    auto* frames_opt = run->add_option("--frames", frames_dir, "Write SVG frames into this directory");
    run->add_option("--every", every, "Frame interval in cycles")->needs(frames_opt)->check(CLI::PositiveNumber);
    run->add_option("--summary", summary_path, "Write the summary JSON here");

    std::string configs_dir, out_dir;
    int jobs = 1;
    auto* batch = app.add_subcommand("batch", "Run every *.json scenario in a directory");
    batch->add_option("--configs", configs_dir, "Directory of scenario files")->required()->check(CLI::ExistingDirectory);
    batch->add_option("--out", out_dir, "Output directory")->required();
    batch->add_option("--jobs", jobs, "Parallel scenarios")->check(CLI::PositiveNumber);

    std::string points_file;
    auto* oracle = app.add_subcommand("oracle", "Reference computations");
    oracle->require_subcommand(1);
    auto* sec = oracle->add_subcommand("sec", "Brute-force smallest enclosing circle");
    sec->add_option("--points", points_file, "JSON array of [x, y]")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : harness::kExitConfig;
    }

    try {
        if (*run) return cmd_run(config, trace_path, frames_dir, every, summary_path);
        if (*batch) return cmd_batch(configs_dir, out_dir, jobs);
        if (*sec) return cmd_oracle_sec(points_file);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
