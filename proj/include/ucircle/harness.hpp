#pragma once

// Scenario files, seeded placement, end-to-end runs and summary metrics.

#include "ucircle/algo_global.hpp"
#include "ucircle/algo_local.hpp"
#include "ucircle/sim.hpp"

#include "json.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ucircle::harness {

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class AlgorithmKind { global, local, local_nonuniform };

struct Placement {
    enum class Kind { random_disc, random_annulus, explicit_points };
    Kind kind = Kind::random_disc;
    double radius = 0.0;  // random_disc
    double inner = 0.0;   // random_annulus
    double outer = 0.0;
    std::vector<Point> points;  // explicit_points
};

struct ScenarioConfig {
    AlgorithmKind algorithm = AlgorithmKind::global;
    int n = 0;
    double a = 0.0;
    double rad = 0.0;
    std::vector<double> vis;  // empty: unlimited; one value: uniform; n values: per robot
    ScheduleKind scheduler = ScheduleKind::ssync;
    std::uint64_t seed = 0;
    long max_cycles = 0;
    int fairness_bound = 0;
    Placement placement;
};

/// Strict: unknown keys, wrong types and out-of-range values throw ConfigError.
/// Fills defaults (max_cycles = 200 n, fairness_bound = 3 n).
ScenarioConfig parse_config(const nlohmann::json& j);
ScenarioConfig load_config(const std::filesystem::path& path);
nlohmann::json to_json(const ScenarioConfig& cfg);

/// Seeded, reproducible world. Throws ConfigError when placement fails.
WorldState generate_scenario(const ScenarioConfig& cfg);

struct RunSummary {
    Outcome outcome = Outcome::budget_exhausted;
    long cycles_used = 0;
    double min_pairwise_dist = 0.0;
    double uniformity_error = 0.0;
    double spacing_min = 0.0;
    std::size_t move_events = 0;
    std::string diagnostic;
};

/// Metrics of the final positions around `center`.
RunSummary compute_metrics(const Trace& trace, const WorldState& final_world, Point center);

struct RunResult {
    Trace trace;
    RunSummary summary;
};

RunResult run_scenario(const ScenarioConfig& cfg);

/// Termination predicate and algorithm for a config.
Algorithm algorithm_for(const ScenarioConfig& cfg);
TerminationPredicate done_for(const ScenarioConfig& cfg);

/// Center used for metrics: SEC center (global) or CIR center (local).
Point metric_center(const ScenarioConfig& cfg, const WorldState& world);

std::string_view summary_outcome_name(Outcome o);
/// Single-line JSON object, fixed key order.
std::string summary_json(const RunSummary& s);

int exit_code(Outcome o);
inline constexpr int kExitConfig = 1;

}  // namespace ucircle::harness
