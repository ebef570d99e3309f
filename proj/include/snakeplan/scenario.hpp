#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "snakeplan/gaits.hpp"
#include "snakeplan/nmpc.hpp"

namespace snakeplan {

/// One reproducible run: robot, initial state, gait, environment and mode
/// options, loaded from a single JSON file.
struct Scenario {
    RobotConfig robot;
    RobotState initial_state;
    bool initial_q_given = false;  // false: joints start on the CPG output
    CpgParams cpg;
    std::string preset_name;       // empty when params were given explicitly

    // Optional resume support: pin the parts of the simulator state that are
    // not part of RobotState, so a run can continue a recorded trajectory
    // sample instead of cold-starting.
    std::optional<Vec6> initial_base_rates;
    FrameMemory initial_frame;  // empty axes = cold start

    std::optional<Corridor> corridor;
    std::optional<Vec2> goal;

    double dt = 1.0 / 200.0;
    double duration = 10.0;
    double epsilon = kDefaultContactEpsilon;

    // predict mode
    double horizon = 0.1;    // seconds per prediction horizon
    double plant_dt = 0.0;   // 0 -> same as dt

    // plan mode
    double planning_horizon = 2.0;  // seconds
    double replan_interval = 0.5;   // seconds
    double goal_tolerance = 0.1;    // meters
    int max_inner_iterations = 12;
    int max_outer_iterations = 2;
    VecX lower_bounds;  // packed CPG-parameter bounds
    VecX upper_bounds;

    unsigned seed = 0;

    int horizon_steps() const { return static_cast<int>(std::lround(horizon / dt)); }
    void validate() const;
};

Scenario load_scenario(const std::string& path,
                       const std::string& gait_dir = default_gait_dir());

/// Scenario back to JSON with all defaults made explicit.
nlohmann::json serialize_scenario(const Scenario& scenario);

/// Initial simulator state implied by the scenario (CPG seeded from the
/// phase offsets; joints on the CPG output unless the file pinned them).
SimState initial_sim_state(const Scenario& scenario);

}  // namespace snakeplan
