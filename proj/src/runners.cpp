#include "snakeplan/runners.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

namespace snakeplan {

namespace fs = std::filesystem;

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void ensure_dir(const std::string& dir) {
    if (!dir.empty()) fs::create_directories(dir);
}

TrajectoryRow make_row(double t, const RobotState& robot, const RomState& rom,
                       double residual) {
    TrajectoryRow row;
    row.t = t;
    row.robot = robot;
    row.rom = rom;
    row.residual = residual;
    return row;
}

}  // namespace

SimulateSummary run_simulate(const Scenario& scenario, const std::string& out_dir) {
    scenario.validate();

    SimState sim = initial_sim_state(scenario);
    const int n_steps = static_cast<int>(std::lround(scenario.duration / scenario.dt));

    SimulateSummary summary;
    summary.trajectory.reserve(n_steps + 1);

    auto [rom0, mem0] = reduce(scenario.robot, sim.robot, sim.frame, scenario.epsilon);
    sim.frame = mem0;
    summary.trajectory.push_back(make_row(0.0, sim.robot, rom0, 0.0));

    VecX duty = VecX::Zero(scenario.robot.link_count);
    duty += rom0.contacts.cast<double>();

    for (int k = 1; k <= n_steps; ++k) {
        auto [next, result] = step(scenario.robot, scenario.cpg, sim, scenario.dt,
                                   scenario.epsilon);
        sim = next;
        summary.trajectory.push_back(
            make_row(k * scenario.dt, sim.robot, result.rom, result.residual));
        duty += result.rom.contacts.cast<double>();
    }

    summary.rows = summary.trajectory.size();
    summary.net_com_displacement =
        summary.trajectory.back().rom.p_com - summary.trajectory.front().rom.p_com;
    summary.contact_duty = duty / static_cast<double>(summary.rows);

    if (!out_dir.empty()) {
        ensure_dir(out_dir);
        write_trajectory_csv(out_dir + "/trajectory.csv", scenario.robot,
                             summary.trajectory, false);
    }
    return summary;
}

PredictReport run_predict(const Scenario& scenario, const std::string& out_dir) {
    scenario.validate();

    const double plant_dt = scenario.plant_dt > 0.0 ? scenario.plant_dt : scenario.dt;
    const int pred_steps = static_cast<int>(std::lround(scenario.horizon / scenario.dt));
    const int plant_steps =
        static_cast<int>(std::lround(scenario.horizon / plant_dt));
    if (pred_steps < 1 || plant_steps < 1)
        throw DomainError("run_predict: horizon shorter than one step");
    const int n_horizons =
        static_cast<int>(std::floor(scenario.duration / scenario.horizon + 1e-9));

    PredictReport report;
    std::ofstream pred_csv;
    if (!out_dir.empty()) {
        ensure_dir(out_dir);
        pred_csv.open(out_dir + "/predictions.csv");
        pred_csv << "horizon,t,pred_x,pred_y,pred_z,actual_x,actual_y,actual_z\n";
    }

    SimState plant = initial_sim_state(scenario);
    {
        auto [rom0, mem0] = reduce(scenario.robot, plant.robot, plant.frame, scenario.epsilon);
        plant.frame = mem0;
    }

    double t = 0.0;
    for (int h = 0; h < n_horizons; ++h) {
        const SimState horizon_start = plant;

        const RolloutResult pred = rollout(scenario.robot, scenario.cpg, horizon_start,
                                           scenario.dt, pred_steps, scenario.epsilon);

        std::vector<Vec3> actual;
        actual.reserve(plant_steps);
        for (int k = 0; k < plant_steps; ++k) {
            auto [next, result] =
                step(scenario.robot, scenario.cpg, plant, plant_dt, scenario.epsilon);
            plant = next;
            actual.push_back(result.rom.p_com);
        }

        const double err = (pred.rom_states.back().p_com - actual.back()).norm();
        report.horizons.push_back({t, err});

        if (pred_csv.is_open()) {
            const double ratio = scenario.dt / plant_dt;
            for (int k = 0; k < pred_steps; ++k) {
                const int plant_idx = std::min(
                    plant_steps - 1,
                    static_cast<int>(std::lround((k + 1) * ratio)) - 1);
                const Vec3& p = pred.rom_states[k].p_com;
                const Vec3& a = actual[plant_idx];
                pred_csv << h << ',' << fmt(t + (k + 1) * scenario.dt) << ','
                         << fmt(p.x()) << ',' << fmt(p.y()) << ',' << fmt(p.z()) << ','
                         << fmt(a.x()) << ',' << fmt(a.y()) << ',' << fmt(a.z()) << '\n';
            }
        }
        t += scenario.horizon;
    }

    double max_err = 0.0, sum_err = 0.0;
    for (const auto& h : report.horizons) {
        max_err = std::max(max_err, h.terminal_com_error);
        sum_err += h.terminal_com_error;
    }
    report.max_terminal_error = max_err;
    report.mean_terminal_error =
        report.horizons.empty() ? 0.0 : sum_err / report.horizons.size();

    if (!out_dir.empty()) {
        std::ofstream err_csv(out_dir + "/horizon_errors.csv");
        err_csv << "t_start,terminal_com_error\n";
        for (const auto& h : report.horizons)
            err_csv << fmt(h.t_start) << ',' << fmt(h.terminal_com_error) << '\n';
    }
    return report;
}

PlanReport run_plan(const Scenario& scenario, const std::string& out_dir) {
    scenario.validate();
    if (!scenario.corridor || !scenario.goal)
        throw DomainError("run_plan: scenario requires corridor and goal");

    NmpcProblem problem;
    problem.goal = *scenario.goal;
    problem.dt = scenario.dt;
    problem.horizon_steps =
        static_cast<int>(std::lround(scenario.planning_horizon / scenario.dt));
    problem.corridor = *scenario.corridor;
    problem.lower_bounds = scenario.lower_bounds;
    problem.upper_bounds = scenario.upper_bounds;
    problem.epsilon = scenario.epsilon;
    problem.max_inner_iterations = scenario.max_inner_iterations;
    problem.max_outer_iterations = scenario.max_outer_iterations;
    problem.replan_interval = scenario.replan_interval;

    PlanReport report;
    SimState sim = initial_sim_state(scenario);

    auto [rom0, mem0] = reduce(scenario.robot, sim.robot, sim.frame, scenario.epsilon);
    sim.frame = mem0;
    report.trajectory.push_back(make_row(0.0, sim.robot, rom0, 0.0));
    report.max_corridor_violation =
        corridor_violation({rom0}, *scenario.corridor);

    double goal_dist = (rom0.p_com.head<2>() - *scenario.goal).norm();
    report.final_goal_distance = goal_dist;
    report.reached_goal = goal_dist < scenario.goal_tolerance;

    const int hold_steps =
        std::max(1, static_cast<int>(std::lround(scenario.replan_interval / scenario.dt)));
    std::optional<NmpcSolution> prev;
    double t = 0.0;

    while (!report.reached_goal && t < scenario.duration - 1e-9) {
        auto [params, solution] =
            mpc_step(problem, scenario.robot, sim, scenario.cpg, prev);
        prev = solution;
        report.solves.push_back(solution);

        for (int k = 0; k < hold_steps && t < scenario.duration - 1e-9; ++k) {
            auto [next, result] =
                step(scenario.robot, params, sim, scenario.dt, scenario.epsilon);
            sim = next;
            t += scenario.dt;

            TrajectoryRow row = make_row(t, sim.robot, result.rom, result.residual);
            row.cost = solution.cost;
            row.violation = solution.constraint_violation;
            report.trajectory.push_back(row);

            report.max_corridor_violation =
                std::max(report.max_corridor_violation,
                         corridor_violation({result.rom}, *scenario.corridor));
            goal_dist = (result.rom.p_com.head<2>() - *scenario.goal).norm();
            if (goal_dist < scenario.goal_tolerance) {
                report.reached_goal = true;
                break;
            }
        }
        report.final_goal_distance = goal_dist;
    }
    report.elapsed_time = t;

    if (!out_dir.empty()) {
        ensure_dir(out_dir);
        write_trajectory_csv(out_dir + "/trajectory.csv", scenario.robot,
                             report.trajectory, true);

        std::ofstream log(out_dir + "/solver_log.csv");
        log << "solve,cost,violation,iterations,converged\n";
        for (size_t i = 0; i < report.solves.size(); ++i) {
            const auto& s = report.solves[i];
            log << i << ',' << fmt(s.cost) << ',' << fmt(s.constraint_violation) << ','
                << s.iterations << ',' << (s.converged ? 1 : 0) << '\n';
        }

        std::ofstream cor(out_dir + "/corridor.csv");
        cor << "p_min_x,p_min_y,p_max_x,p_max_y\n";
        for (const auto& seg : scenario.corridor->segments) {
            cor << fmt(seg.lo.x()) << ',' << fmt(seg.lo.y()) << ',' << fmt(seg.hi.x())
                << ',' << fmt(seg.hi.y()) << '\n';
        }
    }
    return report;
}

}  // namespace snakeplan
