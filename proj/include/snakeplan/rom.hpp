#pragma once

#include <optional>

#include "snakeplan/types.hpp"

namespace snakeplan {

/// Previous-step frame axes used to keep the SVD frame sign-continuous.
struct FrameMemory {
    std::optional<Vec3> x_hat;
    std::optional<Vec3> z_hat;
};

/// Axis-aligned box of the link cloud in the CoM frame.
struct BoundingBox {
    Vec3 half_extents = Vec3::Zero();  // Delta_x, Delta_y, Delta_z
    Vec3 center = Vec3::Zero();        // box midpoint, CoM-frame coordinates
};

/// Reduced-order state: CoM position, floating frame, bounding box and
/// per-link ground-contact flags.
struct RomState {
    Vec3 p_com = Vec3::Zero();
    Mat3 r_com = Mat3::Identity();  // world <- CoM frame, columns [x y z]
    Vec3 delta = Vec3::Zero();      // bounding-box half-extents
    Vec3 box_center = Vec3::Zero(); // box midpoint in the CoM frame
    Eigen::VectorXi contacts;       // length N, entries {0,1}
};

inline constexpr double kDefaultContactEpsilon = 0.015;  // meters

/// Mass-weighted mean of the link positions.
Vec3 com_position(const RobotConfig& config, const Mat3X& links);

/// Link positions relative to the CoM (per-column subtraction).
Mat3X relative_positions(const Mat3X& links, const Vec3& p_com);

/// Floating-frame rotation from the SVD of the relative link positions.
/// x_hat and z_hat are the first and third left-singular vectors with signs
/// held continuous against `memory` (cold start: toward world +x / +z);
/// y_hat = z_hat x x_hat. When the second and third singular values are
/// indistinguishable the z axis is taken from memory (or world z) projected
/// orthogonal to x_hat.
std::pair<Mat3, FrameMemory> com_frame(const Mat3X& rel, const FrameMemory& memory);

/// Expresses relative positions in the CoM frame.
Mat3X to_com_frame(const Mat3& r_com, const Mat3X& rel);

/// Per-axis half-extents (and midpoint) of the CoM-frame link cloud.
BoundingBox bounding_box(const Mat3X& rel_in_com_frame);

/// Contact flags: link i contacts iff its CoM-frame z coordinate is within
/// epsilon of the bounding-box bottom face.
Eigen::VectorXi contact_estimate(const Mat3X& rel_in_com_frame, double epsilon);

/// Full reduction from robot state to RomState.
std::pair<RomState, FrameMemory> reduce(const RobotConfig& config,
                                        const RobotState& state,
                                        const FrameMemory& memory,
                                        double epsilon = kDefaultContactEpsilon);

}  // namespace snakeplan
