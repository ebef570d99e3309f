#include "snakeplan/motion_model.hpp"

#include <Eigen/SVD>

#include "snakeplan/robot_model.hpp"

namespace snakeplan {

ConstraintSystem assemble_constraints(const RobotConfig& config,
                                      const RobotState& state,
                                      const JointReference& ref,
                                      const Eigen::VectorXi& contacts,
                                      const Vec6& prev_base_rates) {
    const int n = config.link_count;
    const int nj = config.joint_count();
    if (contacts.size() != n)
        throw DomainError("assemble_constraints: contact vector length mismatch");
    if (ref.q_dot.size() != nj || ref.q_ddot.size() != nj)
        throw DomainError("assemble_constraints: joint reference length mismatch");

    const MatX jac = stacked_jacobian(config, state);

    VecX full_rates(6 + nj);
    full_rates.head<6>() = prev_base_rates;
    full_rates.tail(nj) = ref.q_dot;
    const VecX bias = jacobian_dot_times_v(config, state, full_rates);

    const int n_contacts = contacts.sum();
    ConstraintSystem sys;
    sys.m = MatX::Zero(4 * n_contacts, 12);
    sys.b = VecX::Zero(4 * n_contacts);

    int row = 0;
    for (int link = 0; link < n; ++link) {
        if (contacts(link) == 0) continue;
        for (int axis = 0; axis < 2; ++axis) {  // world x, y
            const int jac_row = 3 * link + axis;
            // velocity level: J_base * [v; w] = -J_q * q_dot
            sys.m.block<1, 6>(row, 0) = jac.block<1, 6>(jac_row, 0);
            sys.b(row) = -jac.row(jac_row).tail(nj).dot(ref.q_dot);
            // acceleration level: J_base * [a; e] = -J_q * q_ddot - bias
            sys.m.block<1, 6>(row + 1, 6) = jac.block<1, 6>(jac_row, 0);
            sys.b(row + 1) = -jac.row(jac_row).tail(nj).dot(ref.q_ddot) - bias(jac_row);
            row += 2;
        }
    }
    return sys;
}

Vec12 solve_base_rates(const ConstraintSystem& sys) {
    if (sys.m.rows() != sys.b.size())
        throw DomainError("solve_base_rates: inconsistent system dimensions");
    if (sys.m.rows() == 0) return Vec12::Zero();
    if (!sys.m.allFinite() || !sys.b.allFinite())
        throw DomainError("solve_base_rates: non-finite system entries");

    Eigen::JacobiSVD<MatX> svd(sys.m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(1e-8);
    return svd.solve(sys.b);
}

std::pair<SimState, StepResult> step(const RobotConfig& config, const CpgParams& params,
                                     const SimState& sim, double dt, double epsilon) {
    if (!(dt > 0.0)) throw DomainError("step: dt must be > 0");

    SimState next = sim;
    next.cpg = cpg_step(sim.cpg, params, dt);
    const JointReference ref = cpg_output(next.cpg, params);
    next.robot.q = ref.q;  // joint tracking assumed perfect

    const auto [rom_pre, frame_pre] = reduce(config, next.robot, sim.frame, epsilon);

    const ConstraintSystem sys =
        assemble_constraints(config, next.robot, ref, rom_pre.contacts, sim.base_rates);
    const Vec12 x = solve_base_rates(sys);
    const Vec6 vel = x.head<6>();
    const Vec6 acc = x.tail<6>();

    next.robot.p_b += vel.head<3>() * dt + 0.5 * acc.head<3>() * dt * dt;
    next.robot.phi_b += vel.tail<3>() * dt + 0.5 * acc.tail<3>() * dt * dt;
    next.base_rates = vel + acc * dt;

    // Report the reduced state at the post-update pose; the contact set used
    // for the solve came from the pre-update estimate above.
    auto [rom, frame] = reduce(config, next.robot, frame_pre, epsilon);
    next.frame = frame;

    StepResult result;
    result.rom = rom;
    result.residual = sys.m.rows() == 0 ? 0.0 : (sys.m * x - sys.b).norm();
    return {next, result};
}

RolloutResult rollout(const RobotConfig& config, const CpgParams& params,
                      const SimState& sim, double dt, int horizon_steps,
                      double epsilon) {
    if (horizon_steps < 1) throw DomainError("rollout: horizon_steps must be >= 1");

    RolloutResult result;
    result.states.reserve(horizon_steps);
    result.rom_states.reserve(horizon_steps);
    result.residuals.reserve(horizon_steps);

    SimState current = sim;
    for (int k = 0; k < horizon_steps; ++k) {
        auto [next, step_result] = step(config, params, current, dt, epsilon);
        current = next;
        result.states.push_back(current.robot);
        result.rom_states.push_back(step_result.rom);
        result.residuals.push_back(step_result.residual);
    }
    result.final_sim = current;
    return result;
}

}  // namespace snakeplan
