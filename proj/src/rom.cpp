#include "snakeplan/rom.hpp"

#include <Eigen/SVD>

#include "snakeplan/robot_model.hpp"

namespace snakeplan {

Vec3 com_position(const RobotConfig& config, const Mat3X& links) {
    config.validate();
    if (links.cols() != config.link_count)
        throw DomainError("com_position: column count must equal link_count");
    return (links * config.link_masses) / config.link_masses.sum();
}

Mat3X relative_positions(const Mat3X& links, const Vec3& p_com) {
    return links.colwise() - p_com;
}

std::pair<Mat3, FrameMemory> com_frame(const Mat3X& rel, const FrameMemory& memory) {
    if (rel.cols() < 2) throw DegenerateFrameError("com_frame: need at least 2 links");

    Eigen::JacobiSVD<MatX> svd(rel, Eigen::ComputeFullU);
    const Vec3 sigma = svd.singularValues();
    if (sigma(0) < 1e-12)
        throw DegenerateFrameError("com_frame: all links collocated");

    auto oriented = [](Vec3 v, const std::optional<Vec3>& prev, const Vec3& cold_ref) {
        const double d = prev ? v.dot(*prev) : v.dot(cold_ref);
        return d < 0.0 ? Vec3(-v) : v;
    };

    Vec3 x_hat = oriented(svd.matrixU().col(0), memory.x_hat, Vec3::UnitX());

    Vec3 z_hat;
    // sigma2 ~ sigma3 (straight chain, or a cloud with no clearly thinnest
    // direction): the thin axis is poorly identified by the SVD and would
    // chatter, so fall back to the remembered (or world) z axis projected
    // orthogonal to x_hat. "Close" means the gap is under half of sigma2,
    // or both trailing singular values are negligible against sigma1.
    if (sigma(1) - sigma(2) <= std::max(1e-6 * sigma(0), 0.5 * sigma(1))) {
        const Vec3 ref = memory.z_hat.value_or(Vec3::UnitZ());
        Vec3 proj = ref - ref.dot(x_hat) * x_hat;
        if (proj.norm() < 1e-9) {
            if (sigma(1) < 1e-8 * sigma(0))
                throw DegenerateFrameError(
                    "com_frame: rank-deficient cloud with z reference parallel to x");
            proj = oriented(svd.matrixU().col(2), memory.z_hat, Vec3::UnitZ());
        }
        z_hat = proj.normalized();
    } else {
        z_hat = oriented(svd.matrixU().col(2), memory.z_hat, Vec3::UnitZ());
    }

    const Vec3 y_hat = z_hat.cross(x_hat);
    Mat3 r;
    r.col(0) = x_hat;
    r.col(1) = y_hat;
    r.col(2) = z_hat;
    return {r, FrameMemory{x_hat, z_hat}};
}

Mat3X to_com_frame(const Mat3& r_com, const Mat3X& rel) {
    return r_com.transpose() * rel;
}

BoundingBox bounding_box(const Mat3X& rel_in_com_frame) {
    BoundingBox box;
    const Vec3 lo = rel_in_com_frame.rowwise().minCoeff();
    const Vec3 hi = rel_in_com_frame.rowwise().maxCoeff();
    box.half_extents = 0.5 * (hi - lo);
    box.center = 0.5 * (hi + lo);
    return box;
}

Eigen::VectorXi contact_estimate(const Mat3X& rel_in_com_frame, double epsilon) {
    if (!(epsilon > 0.0)) throw DomainError("contact_estimate: epsilon must be > 0");
    const int n = static_cast<int>(rel_in_com_frame.cols());
    const double floor_z = rel_in_com_frame.row(2).minCoeff();
    Eigen::VectorXi contacts(n);
    for (int i = 0; i < n; ++i) {
        contacts(i) = rel_in_com_frame(2, i) <= floor_z + epsilon ? 1 : 0;
    }
    return contacts;
}

std::pair<RomState, FrameMemory> reduce(const RobotConfig& config,
                                        const RobotState& state,
                                        const FrameMemory& memory, double epsilon) {
    const Mat3X links = forward_kinematics(config, state);
    RomState rom;
    rom.p_com = com_position(config, links);
    const Mat3X rel = relative_positions(links, rom.p_com);
    auto [r_com, next_memory] = com_frame(rel, memory);
    rom.r_com = r_com;
    const Mat3X rel_com = to_com_frame(r_com, rel);
    const BoundingBox box = bounding_box(rel_com);
    rom.delta = box.half_extents;
    rom.box_center = box.center;
    rom.contacts = contact_estimate(rel_com, epsilon);
    return {rom, next_memory};
}

}  // namespace snakeplan
