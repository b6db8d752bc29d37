#pragma once

#include <string>
#include <vector>

#include "trajlab/dataset.hpp"
#include "trajlab/denoise.hpp"
#include "trajlab/rng.hpp"
#include "trajlab/schedule.hpp"
#include "trajlab/solvers.hpp"
#include "trajlab/types.hpp"

namespace trajlab {

// Per-trajectory regularity statistics.
struct GeometryReport {
    std::vector<double> deviation;        // perpendicular distance to the endpoint chord
    std::vector<double> sample_distance;  // |x_hat_{t_n} - x_hat_{t_0}|
    double max_deviation_ratio = 0.0;     // max deviation / endpoint distance
    double length = 0.0;                  // sum of segment lengths
    std::vector<double> step_angles_deg;  // angle between consecutive displacements
    std::vector<double> step_cosines;     // cosine of the same angles
    std::vector<double> eps_norms;        // |(x_hat - r(x_hat)) / t| where recorded
    std::vector<double> bandwidths;
    std::vector<std::vector<double>> likelihood_curves;  // one curve per bandwidth
    bool monotone = true;  // likelihood non-decreasing toward t_0 at every bandwidth
};

struct PcaReport {
    std::vector<int> k_values;
    std::vector<double> recon_error;               // RMS trajectory reconstruction error
    std::vector<double> explained_variance_ratio;  // cumulative top-k eigenvalue share
};

// Perpendicular distance of every node to the chord joining the trajectory
// endpoints, plus the distance to the final sample. Computed as the norm of
// the residual after removing the chord component, so the endpoints come out
// zero instead of square-cancellation noise.
std::pair<std::vector<double>, std::vector<double>> deviation_profile(const Trajectory& traj);

// Per-trajectory PCA on the orthogonal complement of the endpoint chord:
// reconstruct every node from the chord projection plus the top (k-1)
// principal components, k = 1..k_max. Errors are RMS over nodes and averaged
// across trajectories; the variance ratios are cumulative eigenvalue shares.
PcaReport pca_reconstruct(const std::vector<Trajectory>& trajs, int k_max);

// Total polyline length and the turning angles (degrees) between consecutive
// displacement vectors; zero-length segments report an angle of 0.
std::pair<double, std::vector<double>> length_and_angles(const Trajectory& traj);

// |eps| = |(x_hat - r(x_hat)) / t| for every node with a recorded denoising
// output.
std::vector<double> eps_norm_profile(const Trajectory& traj);

// KDE log-density of every node at every bandwidth (rows: nodes, cols:
// bandwidths) and whether every column is non-decreasing from t_N to t_0
// within a 1e-9 tolerance.
std::pair<Mat, bool> likelihood_profile(const Trajectory& traj, const Dataset& data,
                                        const std::vector<double>& bandwidths);

// Full per-trajectory report.
GeometryReport analyze_trajectory(const Trajectory& traj, const Dataset& data,
                                  const std::vector<double>& bandwidths);

// Score-deviation diagnosis with a controlled perturbed denoiser: simulate
// the optimal-driven and perturbed-driven trajectories and cross-evaluate
// both denoisers along them.
struct DeviationDiagnosis {
    std::vector<double> times;
    std::vector<double> dev_on_optimal;  // |r(x*) - r*(x*)| along the optimal trajectory
    std::vector<double> dev_on_sampled;  // |r(x) - r*(x)| along the perturbed trajectory
    std::vector<double> d1_over_d2;      // |r-r*| / |r*-x| along the perturbed trajectory
};

DeviationDiagnosis deviation_diagnosis(const Dataset& data, const PerturbedDenoiser& perturbed,
                                       const TimeSchedule& schedule, const Vec& x_init);

// Empirical mean and standard deviation of |z| over draws z ~ N(0, sigma^2 I_d).
std::pair<double, double> gaussian_shell_check(int d, double sigma, int n_samples, RngStream& rng);

std::string geometry_report_to_json(const GeometryReport& report);
std::string pca_report_to_json(const PcaReport& report);

// Per-node curves: node,t,deviation,distance,eps_norm,logp_h1,...
void save_geometry_csv(const GeometryReport& report, const Trajectory& traj,
                       const std::string& path);

}  // namespace trajlab
