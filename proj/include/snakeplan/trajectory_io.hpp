#pragma once

#include <limits>
#include <string>
#include <vector>

#include "snakeplan/motion_model.hpp"

namespace snakeplan {

/// One trajectory row; the planning columns are only written in plan mode.
struct TrajectoryRow {
    double t = 0.0;
    RobotState robot;
    RomState rom;
    double residual = 0.0;
    double cost = std::numeric_limits<double>::quiet_NaN();
    double violation = std::numeric_limits<double>::quiet_NaN();
};

std::vector<std::string> trajectory_header(const RobotConfig& config,
                                           bool with_planner_columns);

/// CSV with a fixed header; doubles as shortest round-trip decimals, rotation
/// matrices flattened row-major. Deterministic byte-for-byte.
void write_trajectory_csv(const std::string& path, const RobotConfig& config,
                          const std::vector<TrajectoryRow>& rows,
                          bool with_planner_columns);

struct ParsedTrajectory {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

ParsedTrajectory read_trajectory_csv(const std::string& path);

/// Re-assembles the RomState columns of a parsed row.
RomState rom_from_row(const RobotConfig& config, const std::vector<std::string>& header,
                      const std::vector<double>& row);

}  // namespace snakeplan
