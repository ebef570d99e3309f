#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

namespace snakeplan {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Vec12 = Eigen::Matrix<double, 12, 1>;
using VecX = Eigen::VectorXd;
using Mat3 = Eigen::Matrix3d;
using Mat3X = Eigen::Matrix3Xd;
using MatX = Eigen::MatrixXd;

/// Thrown when an input violates a model precondition (non-finite state,
/// gimbal-lock pose, bad configuration).
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Thrown when the link cloud is too degenerate to define a floating frame.
class DegenerateFrameError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class JointAxis { Pitch, Yaw };

/// Articulated chain description: N point-mass links joined by N-1
/// single-DOF joints alternating pitch/yaw, pitch first.
struct RobotConfig {
    int link_count = 12;
    double link_length = 1.7 / 12.0;  // meters, uniform
    VecX link_masses;                 // kg, length link_count
    std::vector<JointAxis> joint_axes;

    static RobotConfig make_default(int n_links = 12, double total_length = 1.7);

    int joint_count() const { return link_count - 1; }
    void validate() const;
};

/// Observable base state: head position, XYZ-Euler orientation, joint angles.
struct RobotState {
    Vec3 p_b = Vec3::Zero();
    Vec3 phi_b = Vec3::Zero();  // intrinsic X-Y-Z Euler angles, rad
    VecX q;                     // joint angles, rad, length N-1

    void validate(const RobotConfig& config) const;
};

inline constexpr double kGimbalGuard = 1e-3;  // rad band around |pitch| = pi/2

}  // namespace snakeplan
