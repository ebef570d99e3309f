#pragma once

#include <string>
#include <vector>

#include "snakeplan/cpg.hpp"

namespace snakeplan {

/// Named CPG parameter table shipped with the repo. All presets are tuned
/// in-repo against the kinematic simulator and marked experimental.
struct GaitPreset {
    std::string name;
    std::string description;
    bool experimental = true;
    CpgParams params;
};

/// Directory holding the preset tables. Honors the SNAKEPLAN_DATA_DIR
/// environment variable, otherwise uses the repo data directory.
std::string default_gait_dir();

std::vector<GaitPreset> list_gaits(const std::string& dir = default_gait_dir());

GaitPreset load_gait(const std::string& name, const std::string& dir = default_gait_dir());

}  // namespace snakeplan
