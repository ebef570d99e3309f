#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

#include "snakeplan/runners.hpp"

namespace {

int run_with_scenario(const std::string& mode, const std::string& scenario_path,
                      const std::string& out_dir, double duration_override) {
    using namespace snakeplan;
    Scenario scenario;
    try {
        scenario = load_scenario(scenario_path);
        if (duration_override > 0.0) scenario.duration = duration_override;
    } catch (const DomainError& e) {
        std::cerr << "validation error: " << e.what() << '\n';
        return 2;
    }

    try {
        if (mode == "simulate") {
            const SimulateSummary summary = run_simulate(scenario, out_dir);
            std::printf("rows: %zu\n", summary.rows);
            std::printf("net CoM displacement [m]: %.6f %.6f %.6f (|xy| = %.6f)\n",
                        summary.net_com_displacement.x(),
                        summary.net_com_displacement.y(),
                        summary.net_com_displacement.z(),
                        summary.net_com_displacement.head<2>().norm());
            std::printf("contact duty per link:");
            for (int i = 0; i < summary.contact_duty.size(); ++i)
                std::printf(" %.3f", summary.contact_duty(i));
            std::printf("\n");
        } else if (mode == "predict") {
            const PredictReport report = run_predict(scenario, out_dir);
            std::printf("horizons: %zu\n", report.horizons.size());
            std::printf("terminal CoM error [m]: max %.3e, mean %.3e\n",
                        report.max_terminal_error, report.mean_terminal_error);
        } else {
            const PlanReport report = run_plan(scenario, out_dir);
            std::printf("reached goal: %s\n", report.reached_goal ? "yes" : "no");
            std::printf("final goal distance [m]: %.4f\n", report.final_goal_distance);
            std::printf("max corridor violation [m]: %.3e\n",
                        report.max_corridor_violation);
            std::printf("elapsed simulated time [s]: %.2f\n", report.elapsed_time);
            std::printf("solves: %zu\n", report.solves.size());
            if (!report.reached_goal) return 3;
        }
    } catch (const DomainError& e) {
        std::cerr << "validation error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "runtime error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"snakeplan: reduced-order snake-robot gait simulation and planning"};
    app.require_subcommand(1);

    std::string scenario_path;
    std::string out_dir;
    double duration = 0.0;
    unsigned seed = 0;

    auto add_common = [&](CLI::App* cmd, bool scenario_required = true) {
        cmd->add_option("--scenario", scenario_path, "Scenario JSON file")
            ->required(scenario_required);
        cmd->add_option("--out", out_dir, "Output directory for CSV artifacts");
        cmd->add_option("--duration", duration, "Override scenario duration [s]");
        cmd->add_option("--seed", seed, "Run seed (recorded in outputs)");
    };

    CLI::App* simulate = app.add_subcommand("simulate", "Fixed-parameter gait rollout");
    add_common(simulate);
    CLI::App* predict =
        app.add_subcommand("predict", "Per-horizon prediction against the plant");
    add_common(predict);
    CLI::App* plan = app.add_subcommand("plan", "Closed-loop corridor gait generation");
    add_common(plan);

    CLI::App* gaits = app.add_subcommand("gaits", "Gait preset utilities");
    CLI::App* gaits_list = gaits->add_subcommand("list", "List shipped gait presets");

    CLI11_PARSE(app, argc, argv);

    if (gaits_list->parsed()) {
        try {
            for (const auto& g : snakeplan::list_gaits()) {
                std::printf("%-22s %s%s\n", g.name.c_str(), g.description.c_str(),
                            g.experimental ? " [experimental]" : "");
            }
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << '\n';
            return 2;
        }
        return 0;
    }

    const std::string mode = app.get_subcommands().front()->get_name();
    return run_with_scenario(mode, scenario_path, out_dir, duration);
}
