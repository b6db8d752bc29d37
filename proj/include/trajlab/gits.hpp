#pragma once

#include <string>
#include <vector>

#include "trajlab/denoise.hpp"
#include "trajlab/schedule.hpp"
#include "trajlab/solvers.hpp"
#include "trajlab/types.hpp"

namespace trajlab {

// Fine-grained search grid for the time-schedule DP, plus the solver that
// produces the ground-truth (teacher) trajectories on it.
struct FineGrid {
    TimeSchedule grid_times;
    SolverSpec teacher_spec;

    static FineGrid make(int n_t = 60, double t_min = 0.002, double t_max = 80.0,
                         double rho = 7.0);
};

// Upper-triangular local-truncation-error costs over the fine grid:
// c(i, j) = mean over warmup trajectories of the L2 gap between one Euler
// jump from the teacher state at node i and the teacher state at node j.
// Entries with i >= j are undefined and stored as NaN.
struct CostMatrix {
    Mat c;
    std::vector<double> grid_times;
    int batch = 0;

    int nodes() const { return static_cast<int>(grid_times.size()); }
};

struct DPResult {
    TimeSchedule schedule;
    std::vector<int> path_indices;  // strictly increasing, 0 .. N_t
    double total_cost = 0.0;
    Mat value;  // V(node, k); column 0 unused
};

// One fine-grid teacher trajectory per warmup sample.
std::vector<Trajectory> build_teacher(const FineGrid& fine, const Denoiser& denoiser,
                                      const std::vector<Vec>& warmup, int threads = 1);

// Euler-vs-teacher costs; reuses the teacher's recorded denoising outputs, so
// it needs one denoiser evaluation per (trajectory, grid node) at most.
CostMatrix build_cost_matrix(const FineGrid& fine, const Denoiser& denoiser,
                             const std::vector<Trajectory>& teachers, int threads = 1);

// Minimum-cost path of exactly `budget` transitions from node 0 to the last
// grid node. All transitions except the final hop are scaled by gamma; ties
// break toward the smallest next index. One fill serves every budget up to
// max_budget.
class DpTable {
public:
    DpTable(const CostMatrix& costs, int max_budget, double gamma);
    DPResult extract(int budget) const;

    double gamma() const { return gamma_; }

private:
    const CostMatrix* costs_;
    int max_budget_;
    double gamma_;
    Mat value_;
};

DPResult dp_schedule(const CostMatrix& costs, int budget_nfe, double gamma);

// Mean endpoint gap between runs of (schedule, spec) from x_inits and the
// matching reference trajectories.
double global_error(const TimeSchedule& schedule, const SolverSpec& spec,
                    const Denoiser& denoiser, const std::vector<Vec>& x_inits,
                    const std::vector<Trajectory>& reference);

// CSV dump: one row per node i, cells c(i, i+1) .. c(i, N_t).
void save_cost_matrix_csv(const CostMatrix& costs, const std::string& path);

}  // namespace trajlab
