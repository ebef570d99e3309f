#include "snakeplan/trajectory_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace snakeplan {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

std::vector<std::string> trajectory_header(const RobotConfig& config,
                                           bool with_planner_columns) {
    std::vector<std::string> h{"t", "p_b_x", "p_b_y", "p_b_z",
                               "phi_b_x", "phi_b_y", "phi_b_z"};
    for (int i = 0; i < config.joint_count(); ++i) h.push_back("q_" + std::to_string(i + 1));
    h.insert(h.end(), {"p_com_x", "p_com_y", "p_com_z"});
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c)
            h.push_back("r_com_" + std::to_string(r + 1) + std::to_string(c + 1));
    h.insert(h.end(), {"delta_x", "delta_y", "delta_z"});
    h.insert(h.end(), {"box_center_x", "box_center_y", "box_center_z"});
    for (int i = 0; i < config.link_count; ++i) h.push_back("c_" + std::to_string(i + 1));
    h.push_back("residual");
    if (with_planner_columns) {
        h.push_back("cost");
        h.push_back("violation");
    }
    return h;
}

void write_trajectory_csv(const std::string& path, const RobotConfig& config,
                          const std::vector<TrajectoryRow>& rows,
                          bool with_planner_columns) {
    std::ofstream out(path);
    if (!out) throw DomainError("cannot open trajectory file for writing: " + path);

    const auto header = trajectory_header(config, with_planner_columns);
    for (size_t i = 0; i < header.size(); ++i) {
        if (i) out << ',';
        out << header[i];
    }
    out << '\n';

    for (const auto& row : rows) {
        std::vector<std::string> cells;
        cells.push_back(fmt(row.t));
        for (int k = 0; k < 3; ++k) cells.push_back(fmt(row.robot.p_b(k)));
        for (int k = 0; k < 3; ++k) cells.push_back(fmt(row.robot.phi_b(k)));
        for (int k = 0; k < row.robot.q.size(); ++k) cells.push_back(fmt(row.robot.q(k)));
        for (int k = 0; k < 3; ++k) cells.push_back(fmt(row.rom.p_com(k)));
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) cells.push_back(fmt(row.rom.r_com(r, c)));
        for (int k = 0; k < 3; ++k) cells.push_back(fmt(row.rom.delta(k)));
        for (int k = 0; k < 3; ++k) cells.push_back(fmt(row.rom.box_center(k)));
        for (int k = 0; k < row.rom.contacts.size(); ++k)
            cells.push_back(std::to_string(row.rom.contacts(k)));
        cells.push_back(fmt(row.residual));
        if (with_planner_columns) {
            cells.push_back(fmt(row.cost));
            cells.push_back(fmt(row.violation));
        }
        for (size_t i = 0; i < cells.size(); ++i) {
            if (i) out << ',';
            out << cells[i];
        }
        out << '\n';
    }
}

ParsedTrajectory read_trajectory_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open trajectory file: " + path);

    ParsedTrajectory parsed;
    std::string line;
    if (!std::getline(in, line)) throw DomainError("empty trajectory file: " + path);
    std::stringstream hs(line);
    std::string cell;
    while (std::getline(hs, cell, ',')) parsed.header.push_back(cell);

    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream rs(line);
        while (std::getline(rs, cell, ',')) row.push_back(std::stod(cell));
        if (row.size() != parsed.header.size())
            throw DomainError("trajectory row width mismatch in " + path);
        parsed.rows.push_back(std::move(row));
    }
    return parsed;
}

RomState rom_from_row(const RobotConfig& config, const std::vector<std::string>& header,
                      const std::vector<double>& row) {
    auto col = [&](const std::string& name) {
        for (size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return row.at(i);
        throw DomainError("trajectory column not found: " + name);
    };
    RomState rom;
    rom.p_com = Vec3(col("p_com_x"), col("p_com_y"), col("p_com_z"));
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c)
            rom.r_com(r, c) = col("r_com_" + std::to_string(r + 1) + std::to_string(c + 1));
    rom.delta = Vec3(col("delta_x"), col("delta_y"), col("delta_z"));
    rom.box_center = Vec3(col("box_center_x"), col("box_center_y"), col("box_center_z"));
    rom.contacts.resize(config.link_count);
    for (int i = 0; i < config.link_count; ++i)
        rom.contacts(i) = static_cast<int>(col("c_" + std::to_string(i + 1)));
    return rom;
}

}  // namespace snakeplan
