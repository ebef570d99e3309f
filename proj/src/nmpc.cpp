#include "snakeplan/nmpc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace snakeplan {

void Corridor::validate() const {
    for (size_t i = 0; i < segments.size(); ++i) {
        const auto& s = segments[i];
        if (!(s.lo.x() < s.hi.x()) || !(s.lo.y() < s.hi.y()))
            throw DomainError("Corridor: segment " + std::to_string(i) +
                              " has p_min >= p_max");
        if (i > 0) {
            const auto& p = segments[i - 1];
            const bool overlap = s.lo.x() < p.hi.x() && p.lo.x() < s.hi.x() &&
                                 s.lo.y() < p.hi.y() && p.lo.y() < s.hi.y();
            if (!overlap)
                throw DomainError("Corridor: segments " + std::to_string(i - 1) +
                                  " and " + std::to_string(i) + " do not overlap");
        }
    }
}

void NmpcProblem::validate() const {
    if (horizon_steps < 1) throw DomainError("NmpcProblem: horizon_steps must be >= 1");
    if (!(dt > 0.0)) throw DomainError("NmpcProblem: dt must be > 0");
    if (lower_bounds.size() != upper_bounds.size())
        throw DomainError("NmpcProblem: bound dimension mismatch");
    if ((lower_bounds.array() > upper_bounds.array()).any())
        throw DomainError("NmpcProblem: lower bound exceeds upper bound");
    corridor.validate();
    if (weights.size() != 0 && weights.size() != horizon_steps)
        throw DomainError("NmpcProblem: weights length must equal horizon_steps");
}

VecX pack_params(const CpgParams& params) {
    const int n = params.joint_count();
    VecX x(2 * n);
    x.head(n) = params.amplitude;
    x(n) = params.omega;
    x.tail(n - 1) = params.phase_offsets;
    return x;
}

CpgParams unpack_params(const VecX& x, const CpgParams& like) {
    const int n = like.joint_count();
    if (x.size() != 2 * n) throw DomainError("unpack_params: dimension mismatch");
    CpgParams p = like;
    p.amplitude = x.head(n);
    p.omega = x(n);
    p.phase_offsets = x.tail(n - 1);
    return p;
}

double cost(const std::vector<Vec3>& predicted_com, const Vec2& goal,
            const VecX& weights) {
    if (weights.size() != 0 &&
        weights.size() != static_cast<Eigen::Index>(predicted_com.size()))
        throw DomainError("cost: weights length mismatch");
    double total = 0.0;
    for (size_t i = 0; i < predicted_com.size(); ++i) {
        const double w = weights.size() ? weights(static_cast<Eigen::Index>(i)) : 1.0;
        total += w * (predicted_com[i].head<2>() - goal).squaredNorm();
    }
    return total;
}

double corridor_violation(const std::vector<RomState>& rom_states,
                          const Corridor& corridor) {
    if (corridor.empty())
        throw DomainError("corridor_violation: corridor has no segments");
    double worst = 0.0;
    for (const auto& rom : rom_states) {
        // World-xy footprint of the oriented box: tight axis-aligned cover.
        const Vec3 center_w = rom.p_com + rom.r_com * rom.box_center;
        const double hx = rom.r_com.row(0).cwiseAbs().dot(rom.delta);
        const double hy = rom.r_com.row(1).cwiseAbs().dot(rom.delta);
        const Vec2 lo(center_w.x() - hx, center_w.y() - hy);
        const Vec2 hi(center_w.x() + hx, center_w.y() + hy);

        double best_seg = std::numeric_limits<double>::infinity();
        for (const auto& seg : corridor.segments) {
            double exceed = 0.0;
            exceed = std::max(exceed, seg.lo.x() - lo.x());
            exceed = std::max(exceed, hi.x() - seg.hi.x());
            exceed = std::max(exceed, seg.lo.y() - lo.y());
            exceed = std::max(exceed, hi.y() - seg.hi.y());
            best_seg = std::min(best_seg, exceed);
        }
        worst = std::max(worst, best_seg);
    }
    return worst;
}

EvalResult evaluate(const NmpcProblem& problem, const RobotConfig& config,
                    const SimState& sim, const CpgParams& candidate) {
    problem.validate();
    EvalResult result;
    try {
        const RolloutResult roll = rollout(config, candidate, sim, problem.dt,
                                           problem.horizon_steps, problem.epsilon);
        result.predicted_com.reserve(roll.rom_states.size());
        for (const auto& rom : roll.rom_states) result.predicted_com.push_back(rom.p_com);
        result.cost = cost(result.predicted_com, problem.goal, problem.weights);
        result.violation =
            problem.corridor.empty() ? 0.0
                                     : corridor_violation(roll.rom_states, problem.corridor);
    } catch (const std::exception&) {
        // Infeasible rollout (frame degeneracy, non-finite state): large finite
        // penalty so the line search can back off.
        result.feasible_rollout = false;
        result.cost = 1e12;
        result.violation = 1e6;
    }
    return result;
}

namespace {

VecX clamp_to_bounds(VecX x, const NmpcProblem& problem) {
    if (problem.lower_bounds.size() == 0) return x;
    return x.cwiseMax(problem.lower_bounds).cwiseMin(problem.upper_bounds);
}

// Gradient components pointing out of the active bounds carry no descent
// information; zero them before testing convergence.
VecX projected_gradient(const VecX& x, const VecX& g, const NmpcProblem& problem) {
    if (problem.lower_bounds.size() == 0) return g;
    VecX pg = g;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        if (x(i) <= problem.lower_bounds(i) + 1e-12 && g(i) > 0.0) pg(i) = 0.0;
        if (x(i) >= problem.upper_bounds(i) - 1e-12 && g(i) < 0.0) pg(i) = 0.0;
    }
    return pg;
}

}  // namespace

NmpcSolution solve(const NmpcProblem& problem, const RobotConfig& config,
                   const SimState& sim, const CpgParams& warm_start) {
    problem.validate();

    auto penalized = [&](const VecX& x, double rho, EvalResult* out) {
        const EvalResult r = evaluate(problem, config, sim, unpack_params(x, warm_start));
        if (out) *out = r;
        const double hinge = std::max(0.0, r.violation);
        return r.cost + rho * hinge * hinge;
    };

    VecX x = clamp_to_bounds(pack_params(warm_start), problem);
    const Eigen::Index m = x.size();

    NmpcSolution solution;
    solution.iterations = 0;

    double rho = 1e3;
    EvalResult current_eval;
    double f = penalized(x, rho, &current_eval);

    auto fd_gradient = [&](const VecX& at, double rho_stage) {
        VecX g = VecX::Zero(m);
        for (Eigen::Index i = 0; i < m; ++i) {
            const double h = 1e-5 * std::max(1.0, std::abs(at(i)));
            VecX xp = at, xm = at;
            xp(i) += h;
            xm(i) -= h;
            xp = clamp_to_bounds(xp, problem);
            xm = clamp_to_bounds(xm, problem);
            const double denom = xp(i) - xm(i);
            if (denom <= 0.0) continue;
            g(i) = (penalized(xp, rho_stage, nullptr) -
                    penalized(xm, rho_stage, nullptr)) /
                   denom;
        }
        return g;
    };

    bool converged = false;
    for (int outer = 0; outer < problem.max_outer_iterations; ++outer) {
        f = penalized(x, rho, &current_eval);
        std::vector<double> objectives{f};

        MatX h_inv = MatX::Identity(m, m);
        VecX g = fd_gradient(x, rho);
        converged = false;

        for (int inner = 0; inner < problem.max_inner_iterations; ++inner) {
            const VecX pg = projected_gradient(x, g, problem);
            if (pg.norm() < 1e-6) {
                converged = true;
                break;
            }

            VecX d = -(h_inv * g);
            if (d.dot(g) >= 0.0) d = -pg;  // reset on a non-descent direction

            double alpha = 1.0;
            bool accepted = false;
            VecX x_new;
            double f_new = f;
            for (int ls = 0; ls < 30; ++ls) {
                x_new = clamp_to_bounds(x + alpha * d, problem);
                f_new = penalized(x_new, rho, nullptr);
                const double armijo = 1e-4 * alpha * std::abs(d.dot(g));
                if (f_new <= f - armijo || f_new < f - 1e-14) {
                    accepted = true;
                    break;
                }
                alpha *= 0.5;
            }
            ++solution.iterations;
            if (!accepted) break;

            const VecX s = x_new - x;
            if (s.norm() < 1e-8) {
                x = x_new;
                f = f_new;
                objectives.push_back(f);
                converged = true;
                break;
            }

            const VecX g_new = fd_gradient(x_new, rho);
            const VecX y = g_new - g;
            const double sy = s.dot(y);
            if (sy > 1e-12) {
                const MatX eye = MatX::Identity(m, m);
                const MatX left = eye - (s * y.transpose()) / sy;
                h_inv = left * h_inv * left.transpose() + (s * s.transpose()) / sy;
            }
            x = x_new;
            f = f_new;
            g = g_new;
            objectives.push_back(f);
        }

        solution.stage_objectives.push_back(std::move(objectives));
        penalized(x, rho, &current_eval);
        if (current_eval.violation < 1e-6) break;
        rho *= 100.0;
    }

    solution.params = unpack_params(x, warm_start);
    solution.predicted_com = current_eval.predicted_com;
    solution.cost = current_eval.cost;
    solution.constraint_violation = current_eval.violation;
    solution.converged = converged;
    return solution;
}

std::pair<CpgParams, NmpcSolution> mpc_step(
    const NmpcProblem& problem, const RobotConfig& config, const SimState& sim,
    const CpgParams& preset_warm_start,
    const std::optional<NmpcSolution>& prev_solution) {
    const CpgParams& warm = prev_solution ? prev_solution->params : preset_warm_start;
    NmpcSolution solution = solve(problem, config, sim, warm);
    return {solution.params, std::move(solution)};
}

}  // namespace snakeplan
