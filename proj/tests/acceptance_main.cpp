// End-to-end acceptance suite. Each numbered check prints a single PASS/FAIL
// line; the process exits nonzero if any check fails. Tolerances here are the
// release gate and are intentionally pinned.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "snakeplan/runners.hpp"
#include "test_util.hpp"

using namespace snakeplan;
using testutil::random_state;
using testutil::uniform;

namespace {

struct Check {
    std::string name;
    std::function<bool(std::string&)> run;
};

MatX fd_jacobian(const RobotConfig& config, const RobotState& state, double h) {
    const int nj = config.joint_count();
    MatX jac(3 * config.link_count, 6 + nj);
    auto perturb = [&](int idx, double step) {
        RobotState s = state;
        if (idx < 3) s.p_b(idx) += step;
        else if (idx < 6) s.phi_b(idx - 3) += step;
        else s.q(idx - 6) += step;
        return s;
    };
    for (int idx = 0; idx < 6 + nj; ++idx) {
        const Mat3X plus = forward_kinematics(config, perturb(idx, h));
        const Mat3X minus = forward_kinematics(config, perturb(idx, -h));
        const Mat3X diff = (plus - minus) / (2.0 * h);
        jac.col(idx) = Eigen::Map<const VecX>(diff.data(), diff.size());
    }
    return jac;
}

double amplitude_closed_form(double a, double r0, double rdot0, double gamma, double t) {
    const double alpha = gamma / 2.0;
    const double beta = std::sqrt(3.0) * gamma / 2.0;
    const double c1 = r0 - a;
    const double c2 = (rdot0 + alpha * c1) / beta;
    return a + std::exp(-alpha * t) * (c1 * std::cos(beta * t) + c2 * std::sin(beta * t));
}

SimState gait_sim_state(const CpgParams& params) {
    SimState sim;
    sim.cpg = cpg_initial_state(params);
    sim.robot.q = cpg_output(sim.cpg, params).q;
    return sim;
}

// --- 1: differential kinematics -------------------------------------------

bool check_jacobian(std::string& detail) {
    const RobotConfig config = RobotConfig::make_default();
    double worst_fd = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const RobotState state = random_state(config);
        const MatX jac = stacked_jacobian(config, state);
        const MatX fd = fd_jacobian(config, state, 1e-6);
        worst_fd = std::max(worst_fd, (jac - fd).cwiseAbs().maxCoeff());
    }

    double worst_rigid = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        RobotState state = random_state(config);
        state.p_b.setZero();
        state.phi_b.setZero();
        const Mat3X links = forward_kinematics(config, state);
        RobotState moved = state;
        moved.p_b = Vec3(uniform(-1, 1), uniform(-1, 1), uniform(-1, 1));
        moved.phi_b = Vec3(uniform(-0.8, 0.8), uniform(-0.8, 0.8), uniform(-2, 2));
        const Mat3X expected =
            (base_rotation(moved.phi_b) * links).colwise() + moved.p_b;
        worst_rigid = std::max(
            worst_rigid,
            (forward_kinematics(config, moved) - expected).cwiseAbs().maxCoeff());
    }

    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "max |J - FD| = %.2e (tol 1e-5), rigid-motion error = %.2e (tol 1e-9)",
                  worst_fd, worst_rigid);
    detail = buf;
    return worst_fd < 1e-5 && worst_rigid < 1e-9;
}

// --- 2: state reduction invariants -----------------------------------------

bool check_reduction(std::string& detail) {
    const RobotConfig config = RobotConfig::make_default();
    int failures = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const RobotState state = random_state(config);
        RomState rom;
        try {
            rom = reduce(config, state, FrameMemory{}).first;
        } catch (const DegenerateFrameError&) {
            continue;  // legitimately flat clouds may refuse a frame
        }
        bool ok = (rom.r_com * rom.r_com.transpose() - Mat3::Identity())
                          .cwiseAbs()
                          .maxCoeff() < 1e-9 &&
                  std::abs(rom.r_com.determinant() - 1.0) < 1e-9 &&
                  rom.delta.minCoeff() >= 0.0 && rom.contacts.sum() >= 1;

        // every link must sit inside the reported box
        const Mat3X links = forward_kinematics(config, state);
        const Mat3X rel = relative_positions(links, com_position(config, links));
        const Mat3X local = to_com_frame(rom.r_com, rel);
        for (int i = 0; i < config.link_count && ok; ++i) {
            ok = ((local.col(i) - rom.box_center).cwiseAbs().array() <=
                  rom.delta.array() + 1e-9)
                     .all();
        }
        if (!ok) ++failures;
    }

    // frame continuity along a gait: consecutive axes never flip
    const GaitPreset gait = load_gait("sidewinding");
    SimState sim = gait_sim_state(gait.params);
    FrameMemory memory;
    double min_dot = 1.0;
    RomState prev;
    bool have_prev = false;
    for (int k = 0; k < 400; ++k) {
        auto [rom, next_memory] = reduce(config, sim.robot, memory);
        memory = next_memory;
        if (have_prev) {
            min_dot = std::min(min_dot, rom.r_com.col(0).dot(prev.r_com.col(0)));
            min_dot = std::min(min_dot, rom.r_com.col(2).dot(prev.r_com.col(2)));
        }
        prev = rom;
        have_prev = true;
        sim.cpg = cpg_step(sim.cpg, gait.params, 1.0 / 200.0);
        sim.robot.q = cpg_output(sim.cpg, gait.params).q;
    }

    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "%d/1000 random states violated invariants, min axis continuity dot = %.3f",
                  failures, min_dot);
    detail = buf;
    return failures == 0 && min_dot > 0.0;
}

// --- 3: contact flags against a world-frame oracle --------------------------

bool check_contacts(std::string& detail) {
    // The world-z oracle assumes gravity-aligned "down"; the kinematic
    // simulator has no gravity, so the trace replays the reference joint
    // pattern with the base held level to keep the oracle meaningful.
    const RobotConfig config = RobotConfig::make_default();
    const GaitPreset gait = load_gait("sidewinding");
    SimState sim = gait_sim_state(gait.params);

    const double dt = 1.0 / 200.0;
    const double epsilon = 0.015;
    const int n = config.link_count;
    const int steps = 2000;  // 10 s at 200 Hz
    VecX agree = VecX::Zero(n);
    for (int k = 0; k < steps; ++k) {
        sim.cpg = cpg_step(sim.cpg, gait.params, dt);
        sim.robot.q = cpg_output(sim.cpg, gait.params).q;
        auto [rom, memory] = reduce(config, sim.robot, sim.frame, epsilon);
        sim.frame = memory;
        const Mat3X links = forward_kinematics(config, sim.robot);
        const double min_z = links.row(2).minCoeff();
        for (int i = 0; i < n; ++i) {
            const int oracle = links(2, i) <= min_z + epsilon ? 1 : 0;
            if (oracle == rom.contacts(i)) agree(i) += 1.0;
        }
    }
    agree /= static_cast<double>(steps);

    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "per-link agreement with the height oracle: min %.1f%% (tol 95%%)",
                  100.0 * agree.minCoeff());
    detail = buf;
    return agree.minCoeff() >= 0.95;
}

// --- 4: joint pattern generator ---------------------------------------------

bool check_cpg(std::string& detail) {
    const int n = 11;
    CpgParams p;
    p.amplitude = VecX::Constant(n, 0.4);
    p.omega = M_PI;
    p.phase_offsets = VecX::Constant(n - 1, 0.7);
    p.mu = 0.0;

    // decoupled phases advance linearly
    CpgState s = cpg_initial_state(p);
    const VecX theta0 = s.theta;
    double phase_err = 0.0;
    for (int k = 1; k <= 200; ++k) {
        s = cpg_step(s, p, 1.0 / 200.0);
        phase_err = std::max(
            phase_err,
            (s.theta - (theta0.array() + k * p.omega / 200.0).matrix())
                .cwiseAbs()
                .maxCoeff());
    }

    // amplitude transient matches the closed-form second-order response
    CpgState r = cpg_initial_state(p);
    r.r = VecX::Constant(n, 0.1);
    const double dt = 1.0 / 200.0;
    double amp_err = 0.0;
    for (int k = 1; k <= 400; ++k) {
        r = cpg_step(r, p, dt);
        const double expected =
            amplitude_closed_form(p.amplitude(0), 0.1, 0.0, p.gamma, k * dt);
        amp_err = std::max(amp_err, std::abs(r.r(0) - expected));
    }

    // output derivatives agree with differentiation along the trace
    CpgParams pc = p;
    pc.mu = 0.1;  // mild coupling: keeps the phases in the differentiable regime
    CpgState c = cpg_initial_state(pc);
    c.r = 0.5 * pc.amplitude;
    for (int k = 0; k < 50; ++k) c = cpg_step(c, pc, dt);  // decay the stiff transient
    const double hc = 1e-3;
    double qdot_err = 0.0, qddot_err = 0.0;
    for (int sample = 0; sample < 10; ++sample) {
        for (int k = 0; k < 20; ++k) c = cpg_step(c, pc, dt);
        const CpgState next = cpg_step(c, pc, hc);
        const CpgState next2 = cpg_step(next, pc, hc);
        const JointReference r0 = cpg_output(c, pc);
        const JointReference r1 = cpg_output(next, pc);
        const JointReference r2 = cpg_output(next2, pc);
        qdot_err = std::max(
            qdot_err,
            ((r2.q - r0.q) / (2.0 * hc) - r1.q_dot).cwiseAbs().maxCoeff());
        qddot_err = std::max(
            qddot_err,
            ((r2.q - 2.0 * r1.q + r0.q) / (hc * hc) - r1.q_ddot).cwiseAbs().maxCoeff());
    }

    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "phase err %.1e (1e-9), amplitude err %.1e (1e-6), qdot %.1e (1e-4), qddot %.1e (1e-2)",
                  phase_err, amp_err, qdot_err, qddot_err);
    detail = buf;
    return phase_err < 1e-9 && amp_err < 1e-6 && qdot_err < 1e-4 && qddot_err < 1e-2;
}

// --- 5: contact-consistent base motion ---------------------------------------

bool check_no_slip(std::string& detail) {
    const RobotConfig config = RobotConfig::make_default();
    const int nj = config.joint_count();

    // random configurations with the lowest one or two links in contact:
    // there the constraint system is solvable and the solve must be exact
    double worst = 0.0;
    int checked = 0;
    for (int trial = 0; trial < 500; ++trial) {
        const RobotState state = random_state(config);
        const Mat3X links = forward_kinematics(config, state);
        std::vector<int> order(config.link_count);
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(),
                  [&](int a, int b) { return links(2, a) < links(2, b); });

        JointReference ref;
        ref.q = state.q;
        ref.q_dot = VecX(nj);
        ref.q_ddot = VecX(nj);
        for (int i = 0; i < nj; ++i) {
            ref.q_dot(i) = uniform(-1.0, 1.0);
            ref.q_ddot(i) = uniform(-1.0, 1.0);
        }
        Vec6 prev;
        for (int i = 0; i < 6; ++i) prev(i) = uniform(-0.5, 0.5);

        for (int n_contacts : {1, 2}) {
            Eigen::VectorXi contacts = Eigen::VectorXi::Zero(config.link_count);
            for (int i = 0; i < n_contacts; ++i) contacts(order[i]) = 1;
            const ConstraintSystem sys =
                assemble_constraints(config, state, ref, contacts, prev);
            const Vec12 x = solve_base_rates(sys);
            for (int row = 0; row < sys.m.rows(); row += 4) {
                const double vx = sys.m.row(row).dot(x) - sys.b(row);
                const double vy = sys.m.row(row + 2).dot(x) - sys.b(row + 2);
                worst = std::max(worst, std::hypot(vx, vy));
            }
            ++checked;
        }
    }

    // zero joint rates must leave the base exactly where it was
    CpgParams still = load_gait("rotation").params;
    still.amplitude.setZero();
    SimState sim0 = gait_sim_state(still);
    const RolloutResult roll = rollout(config, still, sim0, 1.0 / 200.0, 100);
    double base_motion = 0.0;
    for (const auto& state : roll.states)
        base_motion = std::max(base_motion,
                               (state.p_b - sim0.robot.p_b).norm() + state.phi_b.norm());

    char buf[180];
    std::snprintf(buf, sizeof buf,
                  "worst contact slip %.1e over %d low-contact systems (tol 1e-8), frozen-base drift %.1e",
                  worst, checked, base_motion);
    detail = buf;
    return worst < 1e-8 && base_motion < 1e-12;
}

// --- 6: open-loop prediction accuracy ---------------------------------------

bool check_prediction(std::string& detail) {
    const std::string path =
        std::string(SNAKEPLAN_SCENARIO_DIR) + "/predict_sidewinding.json";
    Scenario scenario = load_scenario(path);

    scenario.plant_dt = scenario.dt / 5.0;
    const PredictReport fine = run_predict(scenario);

    scenario.plant_dt = 0.0;  // plant and predictor share the step
    const PredictReport self = run_predict(scenario);

    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "max terminal error vs 5x-finer plant %.2e m (tol 1e-3), self-consistency %.1e",
                  fine.max_terminal_error, self.max_terminal_error);
    detail = buf;
    return fine.max_terminal_error < 1e-3 && self.max_terminal_error < 1e-9;
}

// --- 7: gait optimizer internals ---------------------------------------------

bool check_optimizer(std::string& detail) {
    const RobotConfig config = RobotConfig::make_default();
    const GaitPreset gait = load_gait("sidewinding");
    const SimState sim = gait_sim_state(gait.params);

    NmpcProblem problem;
    problem.goal = Vec2(0.4, 0.4);
    problem.horizon_steps = 60;
    problem.dt = 1.0 / 200.0;
    problem.max_inner_iterations = 8;
    problem.lower_bounds = VecX(2 * config.joint_count());
    problem.upper_bounds = VecX(2 * config.joint_count());
    const int nj = config.joint_count();
    problem.lower_bounds.head(nj).setConstant(0.0);
    problem.upper_bounds.head(nj).setConstant(0.7);
    problem.lower_bounds(nj) = -2.0 * M_PI;
    problem.upper_bounds(nj) = 2.0 * M_PI;
    problem.lower_bounds.tail(nj - 1).setConstant(-M_PI);
    problem.upper_bounds.tail(nj - 1).setConstant(M_PI);

    const NmpcSolution solution = solve(problem, config, sim, gait.params);

    bool monotone = true;
    for (const auto& stage : solution.stage_objectives)
        for (size_t i = 1; i < stage.size(); ++i)
            if (stage[i] > stage[i - 1] + 1e-12) monotone = false;

    const VecX x = pack_params(solution.params);
    const bool within =
        (x.array() >= problem.lower_bounds.array() - 1e-12).all() &&
        (x.array() <= problem.upper_bounds.array() + 1e-12).all();

    // finite-difference gradient is step-size consistent (Richardson check)
    const VecX x0 = pack_params(gait.params);
    auto cost_at = [&](const VecX& v) {
        return evaluate(problem, config, sim, unpack_params(v, gait.params)).cost;
    };
    double worst_rel = 0.0;
    for (int idx : {2, nj}) {
        double g[2];
        int gi = 0;
        for (double h : {1e-4, 1e-5}) {
            VecX xp = x0, xm = x0;
            xp(idx) += h;
            xm(idx) -= h;
            g[gi++] = (cost_at(xp) - cost_at(xm)) / (2.0 * h);
        }
        const double scale = std::max({std::abs(g[0]), std::abs(g[1]), 1e-9});
        worst_rel = std::max(worst_rel, std::abs(g[0] - g[1]) / scale);
    }

    char buf[180];
    std::snprintf(buf, sizeof buf,
                  "objective monotone: %s, bounds held: %s, gradient step consistency %.2e (tol 1e-2)",
                  monotone ? "yes" : "no", within ? "yes" : "no", worst_rel);
    detail = buf;
    return monotone && within && worst_rel < 1e-2;
}

// --- 8: closed-loop corridor run ---------------------------------------------

bool check_corridor_run(std::string& detail) {
    const std::string path =
        std::string(SNAKEPLAN_SCENARIO_DIR) + "/corridor_straight.json";
    const Scenario scenario = load_scenario(path);

    const auto start = std::chrono::steady_clock::now();
    const PlanReport report = run_plan(scenario);
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "goal %s in %.1f sim-s (final distance %.3f m), corridor excursion %.1e m, wall %.0f s",
                  report.reached_goal ? "reached" : "missed", report.elapsed_time,
                  report.final_goal_distance, report.max_corridor_violation, wall);
    detail = buf;
    return report.reached_goal && report.max_corridor_violation <= 1e-2 && wall < 600.0;
}

}  // namespace

int main() {
    const std::vector<Check> checks = {
        {"differential kinematics", check_jacobian},
        {"state reduction", check_reduction},
        {"contact estimation", check_contacts},
        {"pattern generator", check_cpg},
        {"contact-consistent motion", check_no_slip},
        {"open-loop prediction", check_prediction},
        {"gait optimizer", check_optimizer},
        {"closed-loop corridor run", check_corridor_run},
    };

    int failed = 0;
    for (size_t i = 0; i < checks.size(); ++i) {
        std::string detail;
        bool ok = false;
        try {
            ok = checks[i].run(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        std::printf("[%s] %zu/%zu %s: %s\n", ok ? "PASS" : "FAIL", i + 1,
                    checks.size(), checks[i].name.c_str(), detail.c_str());
        std::fflush(stdout);
        if (!ok) ++failed;
    }
    return failed == 0 ? 0 : 1;
}
