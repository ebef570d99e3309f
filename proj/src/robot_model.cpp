#include "snakeplan/robot_model.hpp"

#include <array>
#include <cmath>
#include <vector>

namespace snakeplan {

RobotConfig RobotConfig::make_default(int n_links, double total_length) {
    RobotConfig c;
    c.link_count = n_links;
    c.link_length = total_length / static_cast<double>(n_links);
    c.link_masses = VecX::Ones(n_links);
    c.joint_axes.resize(n_links - 1);
    for (int i = 0; i < n_links - 1; ++i) {
        c.joint_axes[i] = (i % 2 == 0) ? JointAxis::Pitch : JointAxis::Yaw;
    }
    return c;
}

void RobotConfig::validate() const {
    if (link_count < 3) throw DomainError("RobotConfig: link_count must be >= 3");
    if (!(link_length > 0.0)) throw DomainError("RobotConfig: link_length must be > 0");
    if (link_masses.size() != link_count)
        throw DomainError("RobotConfig: link_masses length must equal link_count");
    if ((link_masses.array() <= 0.0).any())
        throw DomainError("RobotConfig: all link masses must be > 0");
    if (static_cast<int>(joint_axes.size()) != joint_count())
        throw DomainError("RobotConfig: joint_axes length must equal link_count - 1");
    for (int i = 0; i < joint_count(); ++i) {
        const JointAxis expected = (i % 2 == 0) ? JointAxis::Pitch : JointAxis::Yaw;
        if (joint_axes[i] != expected)
            throw DomainError("RobotConfig: joint_axes must alternate pitch/yaw, pitch first");
    }
}

void RobotState::validate(const RobotConfig& config) const {
    if (q.size() != config.joint_count())
        throw DomainError("RobotState: q length must equal joint count");
    if (!p_b.allFinite() || !phi_b.allFinite() || !q.allFinite())
        throw DomainError("RobotState: non-finite entry");
    if (std::abs(phi_b(1)) >= M_PI / 2.0 - kGimbalGuard)
        throw DomainError("RobotState: base pitch inside gimbal guard band");
}

Mat3 base_rotation(const Vec3& phi) {
    return (Eigen::AngleAxisd(phi(0), Vec3::UnitX()) *
            Eigen::AngleAxisd(phi(1), Vec3::UnitY()) *
            Eigen::AngleAxisd(phi(2), Vec3::UnitZ()))
        .toRotationMatrix();
}

namespace {

Vec3 joint_axis_vector(JointAxis axis) {
    return axis == JointAxis::Pitch ? Vec3::UnitY() : Vec3::UnitZ();
}

// Partial derivatives of base_rotation with respect to each Euler angle.
std::array<Mat3, 3> base_rotation_partials(const Vec3& phi) {
    const Mat3 rx = Eigen::AngleAxisd(phi(0), Vec3::UnitX()).toRotationMatrix();
    const Mat3 ry = Eigen::AngleAxisd(phi(1), Vec3::UnitY()).toRotationMatrix();
    const Mat3 rz = Eigen::AngleAxisd(phi(2), Vec3::UnitZ()).toRotationMatrix();
    Mat3 sx, sy, sz;
    sx << 0, 0, 0, 0, 0, -1, 0, 1, 0;
    sy << 0, 0, 1, 0, 0, 0, -1, 0, 0;
    sz << 0, -1, 0, 1, 0, 0, 0, 0, 0;
    return {sx * rx * ry * rz, rx * sy * ry * rz, rx * ry * sz * rz};
}

}  // namespace

Mat3X forward_kinematics(const RobotConfig& config, const RobotState& state) {
    config.validate();
    state.validate(config);

    const int n = config.link_count;
    Mat3X links(3, n);
    Mat3 r = base_rotation(state.phi_b);
    links.col(0) = state.p_b;
    for (int i = 0; i < n - 1; ++i) {
        r = r * Eigen::AngleAxisd(state.q(i), joint_axis_vector(config.joint_axes[i]))
                    .toRotationMatrix();
        links.col(i + 1) = links.col(i) + r * Vec3(config.link_length, 0.0, 0.0);
    }
    return links;
}

MatX stacked_jacobian(const RobotConfig& config, const RobotState& state) {
    config.validate();
    state.validate(config);

    const int n = config.link_count;
    const int nj = config.joint_count();
    const Mat3X links = forward_kinematics(config, state);
    const Mat3 r_base = base_rotation(state.phi_b);
    const auto dr = base_rotation_partials(state.phi_b);

    // World axes of each joint. Joint i pivots at link i's origin and the
    // rotation about a body axis commutes with itself, so the axis is mapped
    // by the cumulative rotation up to (and excluding) joint i.
    std::vector<Vec3> world_axes(nj);
    Mat3 r = r_base;
    for (int i = 0; i < nj; ++i) {
        world_axes[i] = r * joint_axis_vector(config.joint_axes[i]);
        r = r * Eigen::AngleAxisd(state.q(i), joint_axis_vector(config.joint_axes[i]))
                    .toRotationMatrix();
    }

    MatX jac = MatX::Zero(3 * n, 6 + nj);
    for (int link = 0; link < n; ++link) {
        jac.block<3, 3>(3 * link, 0).setIdentity();
        const Vec3 body_offset = r_base.transpose() * (links.col(link) - state.p_b);
        for (int k = 0; k < 3; ++k) {
            jac.block<3, 1>(3 * link, 3 + k) = dr[k] * body_offset;
        }
        for (int j = 0; j < std::min(link, nj); ++j) {
            jac.block<3, 1>(3 * link, 6 + j) =
                world_axes[j].cross(Vec3(links.col(link) - links.col(j)));
        }
    }
    return jac;
}

VecX jacobian_dot_times_v(const RobotConfig& config, const RobotState& state,
                          const VecX& rates) {
    const int nj = config.joint_count();
    if (rates.size() != 6 + nj)
        throw DomainError("jacobian_dot_times_v: rates length must be 6 + joint count");
    if (!rates.allFinite()) throw DomainError("jacobian_dot_times_v: non-finite rates");

    // Directional finite difference of J along the state flow.
    const double h = 1e-6;
    auto advance = [&](double step) {
        RobotState s = state;
        s.p_b += step * rates.segment<3>(0);
        s.phi_b += step * rates.segment<3>(3);
        s.q += step * rates.tail(nj);
        return s;
    };
    const MatX j_plus = stacked_jacobian(config, advance(h));
    const MatX j_minus = stacked_jacobian(config, advance(-h));
    return ((j_plus - j_minus) / (2.0 * h)) * rates;
}

}  // namespace snakeplan
