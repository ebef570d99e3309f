#include "snakeplan/cpg.hpp"

#include <cmath>

namespace snakeplan {

void CpgParams::validate() const {
    const int n = joint_count();
    if (n < 2) throw DomainError("CpgParams: need at least 2 joints");
    if (phase_offsets.size() != n - 1)
        throw DomainError("CpgParams: phase_offsets length must be n_joints - 1");
    if (!amplitude.allFinite() || !phase_offsets.allFinite() || !std::isfinite(omega))
        throw DomainError("CpgParams: non-finite entry");
    if ((amplitude.array().abs() > M_PI / 2.0 + 1e-12).any())
        throw DomainError("CpgParams: |amplitude| must be <= pi/2");
    if (!(gamma > 0.0)) throw DomainError("CpgParams: gamma must be > 0");
    if (mu < 0.0) throw DomainError("CpgParams: mu must be >= 0");
}

std::pair<MatX, MatX> coupling_matrices(int n_joints) {
    if (n_joints < 2) throw DomainError("coupling_matrices: need n >= 2");
    MatX a = MatX::Zero(n_joints, n_joints);
    for (int i = 1; i < n_joints - 1; ++i) {
        a(i, i - 1) = 1.0;
        a(i, i) = -2.0;
        a(i, i + 1) = 1.0;
    }
    a(0, 0) += 1.0;
    a(0, 1) += 1.0;
    a(n_joints - 1, n_joints - 2) += 1.0;
    a(n_joints - 1, n_joints - 1) += 1.0;

    MatX b = MatX::Zero(n_joints, n_joints - 1);
    for (int i = 0; i < n_joints - 1; ++i) {
        b(i, i) = 1.0;
        b(i + 1, i) = -1.0;
    }
    return {a, b};
}

CpgState cpg_initial_state(const CpgParams& params) {
    params.validate();
    const int n = params.joint_count();
    CpgState state;
    state.theta = VecX::Zero(n);
    for (int i = 1; i < n; ++i) {
        state.theta(i) = state.theta(i - 1) + params.phase_offsets(i - 1);
    }
    state.r = params.amplitude;
    state.r_dot = VecX::Zero(n);
    return state;
}

namespace {

void check_dimensions(const CpgState& state, const CpgParams& params) {
    const int n = params.joint_count();
    if (state.theta.size() != n || state.r.size() != n || state.r_dot.size() != n)
        throw DomainError("CpgState: dimension mismatch with params");
}

}  // namespace

CpgDerivatives cpg_derivatives(const CpgState& state, const CpgParams& params) {
    params.validate();
    check_dimensions(state, params);
    const int n = params.joint_count();
    const auto [a_mat, b_mat] = coupling_matrices(n);

    CpgDerivatives d;
    d.theta_dot = params.mu * (a_mat * state.theta) + params.omega * VecX::Ones(n) -
                  params.mu * (b_mat * params.phase_offsets);
    d.r_dot = state.r_dot;
    d.r_ddot = params.gamma * params.gamma * (params.amplitude - state.r) -
               params.gamma * state.r_dot;
    return d;
}

CpgState cpg_step(const CpgState& state, const CpgParams& params, double dt) {
    if (!(dt > 0.0)) throw DomainError("cpg_step: dt must be > 0");

    auto deriv = [&](const CpgState& s) { return cpg_derivatives(s, params); };
    auto advance = [](const CpgState& s, const CpgDerivatives& d, double h) {
        CpgState out;
        out.theta = s.theta + h * d.theta_dot;
        out.r = s.r + h * d.r_dot;
        out.r_dot = s.r_dot + h * d.r_ddot;
        return out;
    };

    const CpgDerivatives k1 = deriv(state);
    const CpgDerivatives k2 = deriv(advance(state, k1, dt / 2.0));
    const CpgDerivatives k3 = deriv(advance(state, k2, dt / 2.0));
    const CpgDerivatives k4 = deriv(advance(state, k3, dt));

    CpgState next;
    next.theta = state.theta + (dt / 6.0) * (k1.theta_dot + 2.0 * k2.theta_dot +
                                             2.0 * k3.theta_dot + k4.theta_dot);
    next.r =
        state.r + (dt / 6.0) * (k1.r_dot + 2.0 * k2.r_dot + 2.0 * k3.r_dot + k4.r_dot);
    next.r_dot = state.r_dot + (dt / 6.0) * (k1.r_ddot + 2.0 * k2.r_ddot +
                                             2.0 * k3.r_ddot + k4.r_ddot);
    if (!next.theta.allFinite() || !next.r.allFinite() || !next.r_dot.allFinite())
        throw DomainError("cpg_step: non-finite state after integration step");
    return next;
}

JointReference cpg_output(const CpgState& state, const CpgParams& params) {
    check_dimensions(state, params);
    const int n = params.joint_count();
    const auto [a_mat, b_mat] = coupling_matrices(n);
    (void)b_mat;

    const CpgDerivatives d = cpg_derivatives(state, params);
    const VecX theta_ddot = params.mu * (a_mat * d.theta_dot);

    const VecX sin_t = state.theta.array().sin();
    const VecX cos_t = state.theta.array().cos();

    JointReference ref;
    ref.q = state.r.cwiseProduct(sin_t);
    ref.q_dot = state.r_dot.cwiseProduct(sin_t) +
                state.r.cwiseProduct(d.theta_dot).cwiseProduct(cos_t);
    ref.q_ddot = d.r_ddot.cwiseProduct(sin_t) +
                 2.0 * state.r_dot.cwiseProduct(d.theta_dot).cwiseProduct(cos_t) +
                 state.r.cwiseProduct(theta_ddot).cwiseProduct(cos_t) -
                 state.r.cwiseProduct(d.theta_dot.array().square().matrix())
                     .cwiseProduct(sin_t);
    return ref;
}

}  // namespace snakeplan
