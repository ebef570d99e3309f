#pragma once

#include <string>
#include <vector>

#include "snakeplan/scenario.hpp"
#include "snakeplan/trajectory_io.hpp"

namespace snakeplan {

struct SimulateSummary {
    size_t rows = 0;
    Vec3 net_com_displacement = Vec3::Zero();
    VecX contact_duty;  // fraction of timesteps each link was in contact
    std::vector<TrajectoryRow> trajectory;
};

/// Fixed-parameter rollout for scenario.duration; writes trajectory.csv when
/// out_dir is non-empty.
SimulateSummary run_simulate(const Scenario& scenario, const std::string& out_dir = "");

struct HorizonError {
    double t_start = 0.0;
    double terminal_com_error = 0.0;  // meters, at the end of the horizon
};

struct PredictReport {
    std::vector<HorizonError> horizons;
    double max_terminal_error = 0.0;
    double mean_terminal_error = 0.0;
};

/// Runs the plant (at plant_dt, default dt) alongside per-horizon rollouts at
/// dt; the predictor is reset from the plant state at each horizon start.
/// Writes predictions.csv and horizon_errors.csv when out_dir is non-empty.
PredictReport run_predict(const Scenario& scenario, const std::string& out_dir = "");

struct PlanReport {
    bool reached_goal = false;
    double final_goal_distance = 0.0;
    double max_corridor_violation = 0.0;  // of the executed trajectory
    double elapsed_time = 0.0;            // simulated seconds
    std::vector<NmpcSolution> solves;
    std::vector<TrajectoryRow> trajectory;
};

/// Closed-loop receding-horizon run against the kinematic simulator until the
/// goal tolerance or the duration cap. Writes trajectory.csv, solver_log.csv
/// and corridor.csv when out_dir is non-empty.
PlanReport run_plan(const Scenario& scenario, const std::string& out_dir = "");

}  // namespace snakeplan
