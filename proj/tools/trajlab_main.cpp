#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "trajlab/cli.hpp"

namespace {

void add_common_flags(CLI::App* app, trajlab::RunConfig* config) {
    app->add_option("--seed", config->seed, "base RNG seed");
    app->add_option("--dataset", config->dataset_spec,
                    "dataset: csv:<path> | gmm:... | plane:... | corners:...");
    app->add_option("--threads", config->threads, "worker threads (1 = bitwise deterministic)");
    app->add_option("--out", config->out_dir, "output directory");
    app->add_option("--t-min", config->t_min, "minimum timestamp");
    app->add_option("--t-max", config->t_max, "maximum timestamp");
    app->add_option("--rho", config->rho, "polynomial schedule exponent");
    app->set_config("--config", "", "optional key=value config file (flags win)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sampling laboratory for ODE-based diffusion models on exact KDE data"};
    app.require_subcommand(1);

    trajlab::RunConfig config;
    std::string solver_name = "euler";
    std::string schedule_name = "polynomial";
    std::vector<std::string> trajectory_files;

    auto* cmd_sample = app.add_subcommand("sample", "run a sampler batch and write trajectories");
    add_common_flags(cmd_sample, &config);
    cmd_sample->add_option("--solver", solver_name,
                           "euler | heun | dpm2 | spndm | ipndm | deis_ab1");
    cmd_sample->add_option("--schedule-kind", schedule_name, "uniform | logsnr | polynomial");
    cmd_sample->add_option("--schedule-file", config.schedule_file, "schedule JSON path");
    cmd_sample->add_option("--nfe", config.nfe, "number of solver steps");
    cmd_sample->add_option("--order", config.solver.order, "ipndm order (1-4)");
    cmd_sample->add_option("--batch", config.batch, "number of samples");
    cmd_sample->add_flag("--afs", config.solver.afs, "analytic first step");

    auto* cmd_gits = app.add_subcommand("gits", "search a time schedule by dynamic programming");
    add_common_flags(cmd_gits, &config);
    cmd_gits->add_option("--teacher-nfe", config.teacher_nfe, "fine grid size (intervals)");
    cmd_gits->add_option("--budget", config.budgets, "NFE budgets to extract");
    cmd_gits->add_option("--gamma", config.gamma, "DP cost coefficient");
    cmd_gits->add_option("--warmup", config.warmup, "number of warmup samples");
    cmd_gits->add_flag("--dump-cost-matrix", config.dump_cost_matrix, "write cost_matrix.csv");

    auto* cmd_geometry = app.add_subcommand("geometry", "analyze trajectory CSVs");
    add_common_flags(cmd_geometry, &config);
    cmd_geometry->add_option("--bandwidths", config.bandwidths, "KDE bandwidths");
    cmd_geometry->add_option("files", trajectory_files, "trajectory CSV files")->required();

    auto* cmd_schedule = app.add_subcommand("schedule", "print a schedule generator's output");
    add_common_flags(cmd_schedule, &config);
    cmd_schedule->add_option("--schedule-kind", schedule_name, "uniform | logsnr | polynomial");
    cmd_schedule->add_option("--nfe", config.nfe, "number of steps");

    auto* cmd_verify = app.add_subcommand("verify", "run the verification suite");
    add_common_flags(cmd_verify, &config);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        config.solver.method = trajlab::method_from_string(solver_name);
        config.schedule_kind = trajlab::schedule_kind_from_string(schedule_name);

        if (cmd_sample->parsed()) {
            trajlab::cmd_sample(config);
        } else if (cmd_gits->parsed()) {
            trajlab::cmd_gits(config);
        } else if (cmd_geometry->parsed()) {
            trajlab::cmd_geometry(config, trajectory_files);
        } else if (cmd_schedule->parsed()) {
            trajlab::cmd_schedule_print(config, std::cout);
        } else if (cmd_verify->parsed()) {
            return trajlab::cmd_verify(config, std::cout);
        }
    } catch (const std::exception& e) {
        std::cerr << "trajlab: error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
