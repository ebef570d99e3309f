#pragma once

#include <optional>
#include <vector>

#include "snakeplan/motion_model.hpp"

namespace snakeplan {

/// Ordered axis-aligned rectangles in world xy; consecutive segments must
/// overlap so a continuous path through the corridor exists.
struct Corridor {
    struct Segment {
        Vec2 lo;  // p_min
        Vec2 hi;  // p_max
    };
    std::vector<Segment> segments;

    void validate() const;
    bool empty() const { return segments.empty(); }
};

/// Decision-vector layout: [amplitude (n), omega, phase_offsets (n-1)].
VecX pack_params(const CpgParams& params);
CpgParams unpack_params(const VecX& x, const CpgParams& like);

struct NmpcProblem {
    Vec2 goal = Vec2::Zero();      // desired CoM position, world xy
    int horizon_steps = 20;
    double dt = 1.0 / 200.0;
    VecX lower_bounds;             // packed-parameter bounds
    VecX upper_bounds;
    Corridor corridor;
    VecX weights;                  // per-step cost weights; empty = uniform 1
    double epsilon = kDefaultContactEpsilon;
    int max_inner_iterations = 40;
    int max_outer_iterations = 3;
    double replan_interval = 0.5;  // seconds a solved parameter set is held

    void validate() const;
};

struct NmpcSolution {
    CpgParams params;
    std::vector<Vec3> predicted_com;
    double cost = 0.0;
    double constraint_violation = 0.0;
    int iterations = 0;
    bool converged = false;
    // Penalized objective after each accepted line-search step, one sequence
    // per penalty stage; each sequence is non-increasing.
    std::vector<std::vector<double>> stage_objectives;
};

struct EvalResult {
    double cost = 0.0;
    double violation = 0.0;
    std::vector<Vec3> predicted_com;
    bool feasible_rollout = true;
};

/// Weighted sum of squared xy distances to the goal over the horizon.
double cost(const std::vector<Vec3>& predicted_com, const Vec2& goal,
            const VecX& weights);

/// Max over steps of the distance by which the world-xy footprint of the
/// oriented bounding box exits every corridor segment. Zero when the box fits
/// inside at least one segment at each step.
double corridor_violation(const std::vector<RomState>& rom_states,
                          const Corridor& corridor);

/// Single-shooting evaluation of one candidate parameter set.
EvalResult evaluate(const NmpcProblem& problem, const RobotConfig& config,
                    const SimState& sim, const CpgParams& candidate);

/// Penalty-method outer loop with a finite-difference quasi-Newton inner loop
/// and backtracking line search, bound-projected throughout.
NmpcSolution solve(const NmpcProblem& problem, const RobotConfig& config,
                   const SimState& sim, const CpgParams& warm_start);

/// Receding-horizon step: warm-starts from the previous solution when given.
std::pair<CpgParams, NmpcSolution> mpc_step(
    const NmpcProblem& problem, const RobotConfig& config, const SimState& sim,
    const CpgParams& preset_warm_start,
    const std::optional<NmpcSolution>& prev_solution);

}  // namespace snakeplan
