#pragma once

#include "snakeplan/types.hpp"

namespace snakeplan {

/// Oscillator-network inputs: per-joint amplitude, shared frequency and the
/// relative phase between consecutive joints, plus the tracking gains.
struct CpgParams {
    VecX amplitude;      // rad, length n_joints
    double omega = 0.0;  // rad/s, shared
    VecX phase_offsets;  // rad, length n_joints - 1, phi_i = theta_{i+1} - theta_i
    double gamma = 20.0; // amplitude tracking gain, 1/s
    double mu = 10.0;    // phase coupling gain

    int joint_count() const { return static_cast<int>(amplitude.size()); }
    void validate() const;
};

/// Internal oscillator state: instantaneous phase, amplitude, amplitude rate.
struct CpgState {
    VecX theta;
    VecX r;
    VecX r_dot;
};

/// Joint reference triple produced by the oscillators.
struct JointReference {
    VecX q;
    VecX q_dot;
    VecX q_ddot;
};

struct CpgDerivatives {
    VecX theta_dot;
    VecX r_dot;
    VecX r_ddot;
};

/// Phase coupling matrix A (n x n): interior rows (1,-2,1), boundary rows
/// (1,1,...) and (...,1,1). Amplitude coupling matrix B (n x (n-1)): +1 on
/// the diagonal, -1 on the subdiagonal.
std::pair<MatX, MatX> coupling_matrices(int n_joints);

/// State at oscillator phases seeded from the cumulative relative phases,
/// r = amplitude, r_dot = 0.
CpgState cpg_initial_state(const CpgParams& params);

CpgDerivatives cpg_derivatives(const CpgState& state, const CpgParams& params);

/// One classical RK4 step of the oscillator network.
CpgState cpg_step(const CpgState& state, const CpgParams& params, double dt);

/// Joint angle, velocity and acceleration references. theta_ddot is taken as
/// mu*A*theta_dot (params held constant within the step).
JointReference cpg_output(const CpgState& state, const CpgParams& params);

}  // namespace snakeplan
