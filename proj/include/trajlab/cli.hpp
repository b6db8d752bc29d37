#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "trajlab/dataset.hpp"
#include "trajlab/schedule.hpp"
#include "trajlab/solvers.hpp"

namespace trajlab {

// Shared configuration for the CLI subcommands. Identical configs in
// single-threaded mode produce byte-identical outputs.
struct RunConfig {
    std::uint64_t seed = 0;
    std::string dataset_spec = "gmm:modes=2,d=2,count=16,spread=0.2";
    SolverSpec solver;
    ScheduleKind schedule_kind = ScheduleKind::Polynomial;
    std::string schedule_file;  // overrides schedule_kind when set
    int nfe = 10;
    int teacher_nfe = 60;
    std::vector<int> budgets = {10};
    double gamma = 1.15;
    int warmup = 256;
    int batch = 1;
    int threads = 1;
    double t_min = 0.002;
    double t_max = 80.0;
    double rho = 7.0;
    bool dump_cost_matrix = false;
    std::vector<double> bandwidths = {0.1, 1.0, 10.0};
    std::string out_dir = ".";
};

// Dataset specs: "csv:<path>", "gmm:modes=2,d=64,count=64,spread=0.2",
// "plane:m=2,d=512,count=64", "corners:d=1024,count=16". A bare path is
// treated as a CSV file.
Dataset resolve_dataset(const std::string& spec, std::uint64_t seed);

// Schedule for `n_steps` solver steps of the configured kind.
TimeSchedule make_schedule(const RunConfig& config, int n_steps);

// Draws `batch` initial noises from N(0, t_max^2 I) on per-sample streams
// derived from (seed, index), runs the configured solver, and writes one
// trajectory CSV per sample plus a summary JSON.
void cmd_sample(const RunConfig& config);

// Builds warmup teacher trajectories, the cost matrix, and the DP schedule
// for every requested budget; writes one schedule JSON per budget.
void cmd_gits(const RunConfig& config);

// Analyzes previously written trajectory CSVs against a dataset.
void cmd_geometry(const RunConfig& config, const std::vector<std::string>& trajectory_files);

// Prints the configured schedule generator's output as JSON.
void cmd_schedule_print(const RunConfig& config, std::ostream& out);

// Runs the full verification suite on built-in fixtures; returns 0 when
// every criterion passes, 1 otherwise.
int cmd_verify(const RunConfig& config, std::ostream& out);

}  // namespace trajlab
