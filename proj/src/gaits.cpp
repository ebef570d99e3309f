#include "snakeplan/gaits.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include <json.hpp>

namespace snakeplan {

namespace fs = std::filesystem;
using nlohmann::json;

std::string default_gait_dir() {
    if (const char* env = std::getenv("SNAKEPLAN_DATA_DIR")) {
        return std::string(env) + "/gaits";
    }
    return std::string(SNAKEPLAN_DATA_DIR) + "/gaits";
}

namespace {

VecX to_vecx(const json& arr) {
    VecX v(arr.size());
    for (size_t i = 0; i < arr.size(); ++i) v(static_cast<Eigen::Index>(i)) = arr[i].get<double>();
    return v;
}

GaitPreset parse_gait(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("gait file not readable: " + path.string());
    json j = json::parse(in);

    GaitPreset preset;
    preset.name = j.at("name").get<std::string>();
    preset.description = j.value("description", "");
    preset.experimental = j.value("experimental", true);
    preset.params.amplitude = to_vecx(j.at("amplitude"));
    preset.params.omega = j.at("omega").get<double>();
    preset.params.phase_offsets = to_vecx(j.at("phase_offsets"));
    preset.params.gamma = j.value("gamma", 20.0);
    preset.params.mu = j.value("mu", 0.0);
    preset.params.validate();
    return preset;
}

}  // namespace

std::vector<GaitPreset> list_gaits(const std::string& dir) {
    if (!fs::is_directory(dir))
        throw DomainError("gait directory not found: " + dir);
    std::vector<GaitPreset> gaits;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.path().extension() == ".json") gaits.push_back(parse_gait(entry.path()));
    }
    std::sort(gaits.begin(), gaits.end(),
              [](const GaitPreset& a, const GaitPreset& b) { return a.name < b.name; });
    return gaits;
}

GaitPreset load_gait(const std::string& name, const std::string& dir) {
    const fs::path path = fs::path(dir) / (name + ".json");
    if (!fs::exists(path)) throw DomainError("unknown gait preset: " + name);
    return parse_gait(path);
}

}  // namespace snakeplan
