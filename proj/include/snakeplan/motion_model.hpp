#pragma once

#include <vector>

#include "snakeplan/cpg.hpp"
#include "snakeplan/rom.hpp"
#include "snakeplan/types.hpp"

namespace snakeplan {

/// Stacked no-slip system M * x = b over the 12 unknown base rates
/// x = [p_b_dot, phi_b_dot, p_b_ddot, phi_b_ddot]. Rows are the world x/y
/// velocity and acceleration components of each contacting link.
struct ConstraintSystem {
    MatX m;  // (4 * contacts) x 12
    VecX b;
};

/// Everything the kinematic stepper carries between steps.
struct SimState {
    RobotState robot;
    CpgState cpg;
    FrameMemory frame;
    Vec6 base_rates = Vec6::Zero();  // [p_b_dot, phi_b_dot] from the last solve
};

struct StepResult {
    RomState rom;
    double residual = 0.0;  // least-squares residual norm of the no-slip solve
};

struct RolloutResult {
    std::vector<RobotState> states;      // post-step samples, length = n_steps
    std::vector<RomState> rom_states;    // matching reduced states
    std::vector<double> residuals;
    SimState final_sim;
};

ConstraintSystem assemble_constraints(const RobotConfig& config,
                                      const RobotState& state,
                                      const JointReference& ref,
                                      const Eigen::VectorXi& contacts,
                                      const Vec6& prev_base_rates);

/// Minimum-norm least-squares solution (SVD pseudoinverse, rank tolerance
/// 1e-8 * sigma_1). A 0-row system yields the zero vector.
Vec12 solve_base_rates(const ConstraintSystem& sys);

/// Advances CPG and base pose by one step: joints track the CPG output,
/// contacts are re-estimated, the no-slip system is solved and the base is
/// updated by v*dt + a*dt^2/2. With no contacts the base stays frozen.
std::pair<SimState, StepResult> step(const RobotConfig& config,
                                     const CpgParams& params, const SimState& sim,
                                     double dt,
                                     double epsilon = kDefaultContactEpsilon);

RolloutResult rollout(const RobotConfig& config, const CpgParams& params,
                      const SimState& sim, double dt, int horizon_steps,
                      double epsilon = kDefaultContactEpsilon);

}  // namespace snakeplan
