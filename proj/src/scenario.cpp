#include "snakeplan/scenario.hpp"

#include <cmath>
#include <fstream>

namespace snakeplan {

using nlohmann::json;

void Scenario::validate() const {
    robot.validate();
    initial_state.validate(robot);
    cpg.validate();
    if (cpg.joint_count() != robot.joint_count())
        throw DomainError("scenario: cpg joint count must match robot joint count");
    if (!(dt > 0.0)) throw DomainError("scenario: dt must be > 0");
    if (!(duration > 0.0)) throw DomainError("scenario: duration must be > 0");
    if (!(epsilon > 0.0)) throw DomainError("scenario: epsilon must be > 0");
    if (!(horizon > 0.0)) throw DomainError("scenario: horizon must be > 0");
    if (plant_dt < 0.0) throw DomainError("scenario: plant_dt must be >= 0");
    if (!(planning_horizon > 0.0))
        throw DomainError("scenario: planning_horizon must be > 0");
    if (!(replan_interval > 0.0))
        throw DomainError("scenario: replan_interval must be > 0");
    if (!(goal_tolerance > 0.0))
        throw DomainError("scenario: goal_tolerance must be > 0");
    if (corridor) corridor->validate();
}

namespace {

VecX to_vecx(const json& arr, const std::string& field) {
    if (!arr.is_array()) throw DomainError("scenario: " + field + " must be an array");
    VecX v(arr.size());
    for (size_t i = 0; i < arr.size(); ++i) {
        if (!arr[i].is_number())
            throw DomainError("scenario: " + field + " entries must be numbers");
        v(static_cast<Eigen::Index>(i)) = arr[i].get<double>();
    }
    return v;
}

Vec3 to_vec3(const json& arr, const std::string& field) {
    const VecX v = to_vecx(arr, field);
    if (v.size() != 3) throw DomainError("scenario: " + field + " must have 3 entries");
    return v.head<3>();
}

json from_vec(const VecX& v) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
    return arr;
}

// Default packed-parameter bounds: amplitudes in [0, 0.7] rad, omega in
// [-2pi, 2pi], relative phases in [-pi, pi].
void default_bounds(int n_joints, VecX& lower, VecX& upper) {
    lower = VecX(2 * n_joints);
    upper = VecX(2 * n_joints);
    lower.head(n_joints).setConstant(0.0);
    upper.head(n_joints).setConstant(0.7);
    lower(n_joints) = -2.0 * M_PI;
    upper(n_joints) = 2.0 * M_PI;
    lower.tail(n_joints - 1).setConstant(-M_PI);
    upper.tail(n_joints - 1).setConstant(M_PI);
}

}  // namespace

Scenario load_scenario(const std::string& path, const std::string& gait_dir) {
    std::ifstream in(path);
    if (!in) throw DomainError("scenario: file not readable: " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw DomainError("scenario: parse error in " + path + ": " + e.what());
    }

    Scenario s;

    const json robot = j.value("robot", json::object());
    const int n_links = robot.value("link_count", 12);
    const double total = robot.contains("link_length")
                             ? robot.at("link_length").get<double>() * n_links
                             : 1.7;
    s.robot = RobotConfig::make_default(n_links, total);
    if (robot.contains("link_masses"))
        s.robot.link_masses = to_vecx(robot.at("link_masses"), "robot.link_masses");
    try {
        s.robot.validate();
    } catch (const DomainError& e) {
        throw DomainError(std::string("scenario: robot: ") + e.what());
    }

    if (j.contains("cpg")) {
        const json& cpg = j.at("cpg");
        if (cpg.contains("preset")) {
            s.preset_name = cpg.at("preset").get<std::string>();
            s.cpg = load_gait(s.preset_name, gait_dir).params;
        } else {
            s.cpg.amplitude = to_vecx(cpg.at("amplitude"), "cpg.amplitude");
            s.cpg.omega = cpg.at("omega").get<double>();
            s.cpg.phase_offsets = to_vecx(cpg.at("phase_offsets"), "cpg.phase_offsets");
        }
        s.cpg.gamma = cpg.value("gamma", s.cpg.gamma);
        s.cpg.mu = cpg.value("mu", s.cpg.mu);
        // presets fix the gait shape; omega may still be overridden so a
        // scenario can replay the same gait at a different tempo
        if (cpg.contains("preset") && cpg.contains("omega"))
            s.cpg.omega = cpg.at("omega").get<double>();
    } else {
        throw DomainError("scenario: missing required field cpg");
    }

    const json init = j.value("initial_state", json::object());
    if (init.contains("p_b")) s.initial_state.p_b = to_vec3(init.at("p_b"), "initial_state.p_b");
    if (init.contains("phi_b"))
        s.initial_state.phi_b = to_vec3(init.at("phi_b"), "initial_state.phi_b");
    if (init.contains("q")) {
        s.initial_state.q = to_vecx(init.at("q"), "initial_state.q");
        s.initial_q_given = true;
    } else {
        s.initial_state.q = VecX::Zero(s.robot.joint_count());
    }
    if (init.contains("base_rates")) {
        const VecX r = to_vecx(init.at("base_rates"), "initial_state.base_rates");
        if (r.size() != 6)
            throw DomainError("scenario: initial_state.base_rates must have 6 entries");
        s.initial_base_rates = Vec6(r.head<6>());
    }
    if (init.contains("frame_x"))
        s.initial_frame.x_hat = to_vec3(init.at("frame_x"), "initial_state.frame_x");
    if (init.contains("frame_z"))
        s.initial_frame.z_hat = to_vec3(init.at("frame_z"), "initial_state.frame_z");

    if (j.contains("corridor")) {
        Corridor c;
        const json& segs = j.at("corridor");
        if (!segs.is_array() || segs.empty())
            throw DomainError("scenario: corridor must be a non-empty array");
        for (size_t i = 0; i < segs.size(); ++i) {
            const std::string field = "corridor[" + std::to_string(i) + "]";
            const VecX lo = to_vecx(segs[i].at("p_min"), field + ".p_min");
            const VecX hi = to_vecx(segs[i].at("p_max"), field + ".p_max");
            if (lo.size() != 2 || hi.size() != 2)
                throw DomainError("scenario: " + field + " entries must have 2 components");
            c.segments.push_back({lo.head<2>(), hi.head<2>()});
        }
        try {
            c.validate();
        } catch (const DomainError& e) {
            throw DomainError(std::string("scenario: corridor: ") + e.what());
        }
        s.corridor = c;
    }

    if (j.contains("goal")) {
        const VecX g = to_vecx(j.at("goal"), "goal");
        if (g.size() < 2) throw DomainError("scenario: goal must have at least 2 components");
        s.goal = Vec2(g(0), g(1));
    }

    s.dt = j.value("dt", s.dt);
    s.duration = j.value("duration", s.duration);
    s.epsilon = j.value("epsilon", s.epsilon);
    s.horizon = j.value("horizon", s.horizon);
    s.plant_dt = j.value("plant_dt", s.plant_dt);
    s.planning_horizon = j.value("planning_horizon", s.planning_horizon);
    s.replan_interval = j.value("replan_interval", s.replan_interval);
    s.goal_tolerance = j.value("goal_tolerance", s.goal_tolerance);
    s.max_inner_iterations = j.value("max_inner_iterations", s.max_inner_iterations);
    s.max_outer_iterations = j.value("max_outer_iterations", s.max_outer_iterations);
    s.seed = j.value("seed", 0u);

    default_bounds(s.robot.joint_count(), s.lower_bounds, s.upper_bounds);
    if (j.contains("bounds")) {
        const json& b = j.at("bounds");
        const int nj = s.robot.joint_count();
        if (b.contains("amplitude")) {
            const VecX range = to_vecx(b.at("amplitude"), "bounds.amplitude");
            s.lower_bounds.head(nj).setConstant(range(0));
            s.upper_bounds.head(nj).setConstant(range(1));
        }
        if (b.contains("omega")) {
            const VecX range = to_vecx(b.at("omega"), "bounds.omega");
            s.lower_bounds(nj) = range(0);
            s.upper_bounds(nj) = range(1);
        }
        if (b.contains("phase")) {
            const VecX range = to_vecx(b.at("phase"), "bounds.phase");
            s.lower_bounds.tail(nj - 1).setConstant(range(0));
            s.upper_bounds.tail(nj - 1).setConstant(range(1));
        }
        // full per-entry vectors win over the ranged shorthands
        if (b.contains("lower")) {
            const VecX lo = to_vecx(b.at("lower"), "bounds.lower");
            if (lo.size() != s.lower_bounds.size())
                throw DomainError("scenario: bounds.lower must have " +
                                  std::to_string(s.lower_bounds.size()) + " entries");
            s.lower_bounds = lo;
        }
        if (b.contains("upper")) {
            const VecX hi = to_vecx(b.at("upper"), "bounds.upper");
            if (hi.size() != s.upper_bounds.size())
                throw DomainError("scenario: bounds.upper must have " +
                                  std::to_string(s.upper_bounds.size()) + " entries");
            s.upper_bounds = hi;
        }
    }

    s.validate();
    return s;
}

json serialize_scenario(const Scenario& s) {
    json j;
    j["robot"] = {{"link_count", s.robot.link_count},
                  {"link_length", s.robot.link_length},
                  {"link_masses", from_vec(s.robot.link_masses)}};
    j["initial_state"] = {{"p_b", from_vec(s.initial_state.p_b)},
                          {"phi_b", from_vec(s.initial_state.phi_b)}};
    if (s.initial_q_given) j["initial_state"]["q"] = from_vec(s.initial_state.q);
    if (s.initial_base_rates)
        j["initial_state"]["base_rates"] = from_vec(*s.initial_base_rates);
    if (s.initial_frame.x_hat)
        j["initial_state"]["frame_x"] = from_vec(*s.initial_frame.x_hat);
    if (s.initial_frame.z_hat)
        j["initial_state"]["frame_z"] = from_vec(*s.initial_frame.z_hat);
    j["cpg"] = {{"amplitude", from_vec(s.cpg.amplitude)},
                {"omega", s.cpg.omega},
                {"phase_offsets", from_vec(s.cpg.phase_offsets)},
                {"gamma", s.cpg.gamma},
                {"mu", s.cpg.mu}};
    if (!s.preset_name.empty()) j["cpg"]["preset"] = s.preset_name;
    if (s.corridor) {
        json segs = json::array();
        for (const auto& seg : s.corridor->segments) {
            segs.push_back({{"p_min", {seg.lo.x(), seg.lo.y()}},
                            {"p_max", {seg.hi.x(), seg.hi.y()}}});
        }
        j["corridor"] = segs;
    }
    if (s.goal) j["goal"] = {s.goal->x(), s.goal->y()};
    j["dt"] = s.dt;
    j["duration"] = s.duration;
    j["epsilon"] = s.epsilon;
    j["horizon"] = s.horizon;
    j["plant_dt"] = s.plant_dt;
    j["planning_horizon"] = s.planning_horizon;
    j["replan_interval"] = s.replan_interval;
    j["goal_tolerance"] = s.goal_tolerance;
    j["max_inner_iterations"] = s.max_inner_iterations;
    j["max_outer_iterations"] = s.max_outer_iterations;
    j["seed"] = s.seed;
    j["bounds"] = {{"lower", from_vec(s.lower_bounds)},
                   {"upper", from_vec(s.upper_bounds)}};
    return j;
}

SimState initial_sim_state(const Scenario& scenario) {
    SimState sim;
    sim.robot = scenario.initial_state;
    sim.cpg = cpg_initial_state(scenario.cpg);
    if (!scenario.initial_q_given) {
        sim.robot.q = cpg_output(sim.cpg, scenario.cpg).q;
    }
    if (scenario.initial_base_rates) sim.base_rates = *scenario.initial_base_rates;
    sim.frame = scenario.initial_frame;
    return sim;
}

}  // namespace snakeplan
