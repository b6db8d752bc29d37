#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "trajlab/denoise.hpp"
#include "trajlab/schedule.hpp"
#include "trajlab/types.hpp"

namespace trajlab {

enum class Method { Euler, Heun, Dpm2, Spndm, Ipndm, DeisAb1 };

std::string to_string(Method m);
Method method_from_string(const std::string& s);

// Whether second-order steps use their published update or the generalized
// denoising output R = r + ((t_next - t_cur)/2) * dr/dt with the method's
// finite difference, applied through the Euler convex combination.
enum class Formulation { Native, Generalized };

struct SolverSpec {
    Method method = Method::Euler;
    int order = 4;  // ipndm only, clamped to [1,4]
    bool afs = false;
    Formulation formulation = Formulation::Native;
};

// Coupled sampling sequence: states x_hat at descending times plus the
// denoising outputs r(x_hat) recorded when the solver evaluates them (absent
// at nodes with no evaluation, e.g. the final node).
struct Trajectory {
    std::vector<double> times;
    std::vector<Vec> states;
    std::vector<std::optional<Vec>> denoised;
    int nfe = 0;
};

// Previous denoising output for the multistep second-order methods.
struct StepHistory {
    double t_prev;
    Vec r_prev;
    Vec eps_prev;
};

// One Euler step, the convex combination
//   x_next = (t_next/t_cur) x + (1 - t_next/t_cur) r(x, t_cur).
// Exactly one denoiser evaluation; t_next = 0 returns r exactly.
std::pair<Vec, DenoiserOutput> euler_step(const Denoiser& denoiser, const Vec& x,
                                          double t_cur, double t_next);

struct SecondOrderResult {
    Vec x_next;
    DenoiserOutput current;  // evaluation at (x, t_cur), for trajectory recording
    int evals = 0;
};

// Heun / DPM-Solver-2 / S-PNDM / DEIS rhoAB1 step in either formulation.
// spndm and deis_ab1 require `history`; heun and dpm2 spend two evaluations
// and need t_next > 0.
SecondOrderResult second_order_step(const SolverSpec& spec, const Denoiser& denoiser,
                                    const Vec& x, double t_cur, double t_next,
                                    const std::optional<StepHistory>& history);

// Analytic first step under the Gaussian-prior score (r ~ 0): a pure rescale
// costing zero denoiser evaluations.
Vec afs_step(const Vec& x, double t_cur, double t_next);

// Adams-Bashforth step on the noise prediction, order set by the available
// history length (most recent first, trimmed to 3 entries).
std::pair<Vec, DenoiserOutput> ipndm_step(const Denoiser& denoiser, const Vec& x,
                                          double t_cur, double t_next,
                                          const std::vector<Vec>& eps_history,
                                          int max_order = 4);

// Runs the chosen method over consecutive schedule pairs. NFE accounting:
// euler/ipndm/spndm/deis N (N-1 with AFS); heun/dpm2 2N-1 with no second
// evaluation at the final step (2N-3 with AFS).
Trajectory sample(const SolverSpec& spec, const Denoiser& denoiser,
                  const TimeSchedule& schedule, const Vec& x_init);

// CSV export: header t,x0,...,x{d-1}[,r0,...,r{d-1}], one row per node,
// 17-significant-digit floats; r cells empty where no evaluation occurred.
void save_trajectory_csv(const Trajectory& traj, const std::string& path);
Trajectory load_trajectory_csv(const std::string& path);

}  // namespace trajlab
