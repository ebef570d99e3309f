#pragma once

#include "snakeplan/types.hpp"

namespace snakeplan {

/// World positions of the N link origins as a 3xN matrix.
/// Link 1 sits at the base; consecutive origins are link_length apart.
Mat3X forward_kinematics(const RobotConfig& config, const RobotState& state);

/// Base rotation matrix from intrinsic X-Y-Z Euler angles.
Mat3 base_rotation(const Vec3& phi);

/// Stacked position Jacobian J (3N x (6 + N-1)) such that the stacked link
/// velocity equals J * [p_b_dot, phi_b_dot, q_dot].
MatX stacked_jacobian(const RobotConfig& config, const RobotState& state);

/// Bias term Jdot * rates of the stacked acceleration relation
/// P_ddot = J * rates_ddot + Jdot * rates. `rates` has length 6 + N-1.
VecX jacobian_dot_times_v(const RobotConfig& config, const RobotState& state,
                          const VecX& rates);

}  // namespace snakeplan
