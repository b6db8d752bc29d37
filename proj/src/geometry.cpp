#include "trajlab/geometry.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace trajlab {

namespace {

double chord_norm_or_throw(const Trajectory& traj) {
    const double norm = (traj.states.front() - traj.states.back()).norm();
    if (norm == 0.0) throw std::domain_error("geometry: coincident trajectory endpoints");
    return norm;
}

}  // namespace

std::pair<std::vector<double>, std::vector<double>> deviation_profile(const Trajectory& traj) {
    if (traj.states.size() < 3) throw std::domain_error("deviation_profile: need >= 3 nodes");
    const double chord = chord_norm_or_throw(traj);
    const Vec& base = traj.states.back();
    const Vec u = (traj.states.front() - base) / chord;

    std::vector<double> deviations, distances;
    deviations.reserve(traj.states.size());
    distances.reserve(traj.states.size());
    for (const Vec& x : traj.states) {
        const Vec delta = x - base;
        // Residual-vector norm rather than sqrt(|d|^2 - <d,u>^2): the squared
        // form cancels catastrophically at the endpoints.
        deviations.push_back((delta - delta.dot(u) * u).norm());
        distances.push_back(delta.norm());
    }
    return {std::move(deviations), std::move(distances)};
}

PcaReport pca_reconstruct(const std::vector<Trajectory>& trajs, int k_max) {
    if (k_max < 1) throw std::domain_error("pca_reconstruct: k_max must be >= 1");
    if (trajs.empty()) throw std::domain_error("pca_reconstruct: no trajectories");

    PcaReport report;
    report.k_values.resize(static_cast<size_t>(k_max));
    for (int k = 1; k <= k_max; ++k) report.k_values[static_cast<size_t>(k - 1)] = k;
    report.recon_error.assign(static_cast<size_t>(k_max), 0.0);
    report.explained_variance_ratio.assign(static_cast<size_t>(k_max), 0.0);

    for (const Trajectory& traj : trajs) {
        const int m = static_cast<int>(traj.states.size());
        if (m < k_max + 1) throw std::domain_error("pca_reconstruct: fewer nodes than k_max + 1");
        const double chord = chord_norm_or_throw(traj);
        const Vec& base = traj.states.back();
        const Vec u = (traj.states.front() - base) / chord;

        // Residuals in the orthogonal complement of the chord direction.
        const long d = traj.states.front().size();
        Mat residuals(m, d);
        for (int n = 0; n < m; ++n) {
            const Vec delta = traj.states[static_cast<size_t>(n)] - base;
            residuals.row(n) = (delta - delta.dot(u) * u).transpose();
        }

        Eigen::BDCSVD<Mat> svd(residuals, Eigen::ComputeThinV);
        const Vec& sv = svd.singularValues();
        const Mat& pcs = svd.matrixV();  // columns are principal directions
        const int n_pc = static_cast<int>(sv.size());

        const Mat coeffs = residuals * pcs;  // m x n_pc projections
        const Vec res_norm2 = residuals.rowwise().squaredNorm();
        const double total_var = sv.squaredNorm();

        for (int k = 1; k <= k_max; ++k) {
            const int used = std::min(k - 1, n_pc);
            double sum_err2 = 0.0;
            for (int n = 0; n < m; ++n) {
                double err2 = res_norm2[n];
                for (int c = 0; c < used; ++c) err2 -= coeffs(n, c) * coeffs(n, c);
                sum_err2 += std::max(err2, 0.0);
            }
            report.recon_error[static_cast<size_t>(k - 1)] += std::sqrt(sum_err2 / m);

            double top = 0.0;
            for (int c = 0; c < std::min(k, n_pc); ++c) top += sv[c] * sv[c];
            report.explained_variance_ratio[static_cast<size_t>(k - 1)] +=
                total_var > 0.0 ? top / total_var : 1.0;
        }
    }

    const double inv = 1.0 / static_cast<double>(trajs.size());
    for (auto& v : report.recon_error) v *= inv;
    for (auto& v : report.explained_variance_ratio) v *= inv;
    return report;
}

std::pair<double, std::vector<double>> length_and_angles(const Trajectory& traj) {
    if (traj.states.size() < 2) throw std::domain_error("length_and_angles: need >= 2 nodes");

    double length = 0.0;
    std::vector<Vec> steps;
    steps.reserve(traj.states.size() - 1);
    for (size_t n = 0; n + 1 < traj.states.size(); ++n) {
        steps.push_back(traj.states[n + 1] - traj.states[n]);
        length += steps.back().norm();
    }

    std::vector<double> angles;
    angles.reserve(steps.size() > 0 ? steps.size() - 1 : 0);
    for (size_t n = 0; n + 1 < steps.size(); ++n) {
        const double na = steps[n].norm();
        const double nb = steps[n + 1].norm();
        if (na == 0.0 || nb == 0.0) {
            angles.push_back(0.0);
            continue;
        }
        const double c = std::clamp(steps[n].dot(steps[n + 1]) / (na * nb), -1.0, 1.0);
        angles.push_back(std::acos(c) * 180.0 / M_PI);
    }
    return {length, std::move(angles)};
}

std::vector<double> eps_norm_profile(const Trajectory& traj) {
    std::vector<double> norms;
    for (size_t n = 0; n < traj.states.size(); ++n) {
        if (!traj.denoised[n]) continue;
        norms.push_back((traj.states[n] - *traj.denoised[n]).norm() / traj.times[n]);
    }
    return norms;
}

std::pair<Mat, bool> likelihood_profile(const Trajectory& traj, const Dataset& data,
                                        const std::vector<double>& bandwidths) {
    for (double h : bandwidths)
        if (h <= 0.0) throw std::domain_error("likelihood_profile: bandwidths must be positive");

    const int m = static_cast<int>(traj.states.size());
    const int b = static_cast<int>(bandwidths.size());
    Mat curve(m, b);
    for (int n = 0; n < m; ++n)
        for (int j = 0; j < b; ++j)
            curve(n, j) = kde_log_density(data, traj.states[static_cast<size_t>(n)], bandwidths[static_cast<size_t>(j)]);

    bool monotone = true;
    for (int j = 0; j < b; ++j)
        for (int n = 0; n + 1 < m; ++n)
            if (curve(n + 1, j) < curve(n, j) - 1e-9) monotone = false;
    return {std::move(curve), monotone};
}

GeometryReport analyze_trajectory(const Trajectory& traj, const Dataset& data,
                                  const std::vector<double>& bandwidths) {
    GeometryReport report;
    auto [dev, dist] = deviation_profile(traj);
    report.deviation = std::move(dev);
    report.sample_distance = std::move(dist);

    const double chord = (traj.states.front() - traj.states.back()).norm();
    double max_dev = 0.0;
    for (double v : report.deviation) max_dev = std::max(max_dev, v);
    report.max_deviation_ratio = max_dev / chord;

    auto [length, angles] = length_and_angles(traj);
    report.length = length;
    report.step_angles_deg = std::move(angles);
    report.step_cosines.reserve(report.step_angles_deg.size());
    for (double a : report.step_angles_deg)
        report.step_cosines.push_back(std::cos(a * M_PI / 180.0));

    report.eps_norms = eps_norm_profile(traj);

    report.bandwidths = bandwidths;
    if (!bandwidths.empty()) {
        auto [curve, monotone] = likelihood_profile(traj, data, bandwidths);
        report.monotone = monotone;
        report.likelihood_curves.resize(bandwidths.size());
        for (size_t j = 0; j < bandwidths.size(); ++j) {
            report.likelihood_curves[j].resize(static_cast<size_t>(curve.rows()));
            for (int n = 0; n < curve.rows(); ++n)
                report.likelihood_curves[j][static_cast<size_t>(n)] = curve(n, static_cast<int>(j));
        }
    }
    return report;
}

DeviationDiagnosis deviation_diagnosis(const Dataset& data, const PerturbedDenoiser& perturbed,
                                       const TimeSchedule& schedule, const Vec& x_init) {
    if (perturbed.deviation_scale() > 1.0)
        throw std::domain_error("deviation_diagnosis: deviation_scale must be <= 1");

    const OptimalDenoiser optimal(data);
    SolverSpec spec;  // Euler
    const Trajectory traj_star = sample(spec, optimal, schedule, x_init);
    const Trajectory traj_hat = sample(spec, perturbed, schedule, x_init);

    DeviationDiagnosis diag;
    for (size_t n = 0; n < traj_star.states.size(); ++n) {
        if (!traj_star.denoised[n]) continue;
        const double t = traj_star.times[n];
        diag.times.push_back(t);

        // Cross-evaluate the other denoiser on each trajectory.
        const Vec r_on_star = perturbed.evaluate(traj_star.states[n], t).r;
        diag.dev_on_optimal.push_back((r_on_star - *traj_star.denoised[n]).norm());

        const Vec r_star_on_hat = optimal.evaluate(traj_hat.states[n], t).r;
        const double d1 = (*traj_hat.denoised[n] - r_star_on_hat).norm();
        const double d2 = (r_star_on_hat - traj_hat.states[n]).norm();
        diag.dev_on_sampled.push_back(d1);
        diag.d1_over_d2.push_back(d2 > 0.0 ? d1 / d2 : 0.0);
    }
    return diag;
}

std::pair<double, double> gaussian_shell_check(int d, double sigma, int n_samples, RngStream& rng) {
    if (d < 1) throw std::domain_error("gaussian_shell_check: d must be >= 1");
    if (n_samples < 100) throw std::domain_error("gaussian_shell_check: need >= 100 samples");

    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < n_samples; ++i) {
        const double norm = sigma * rng.gaussian_vector(d).norm();
        sum += norm;
        sum2 += norm * norm;
    }
    const double mean = sum / n_samples;
    const double var = std::max(sum2 / n_samples - mean * mean, 0.0);
    return {mean, std::sqrt(var)};
}

std::string geometry_report_to_json(const GeometryReport& report) {
    nlohmann::json j;
    j["deviation"] = report.deviation;
    j["sample_distance"] = report.sample_distance;
    j["max_deviation_ratio"] = report.max_deviation_ratio;
    j["length"] = report.length;
    j["step_angles_deg"] = report.step_angles_deg;
    j["step_cosines"] = report.step_cosines;
    j["eps_norms"] = report.eps_norms;
    j["bandwidths"] = report.bandwidths;
    j["likelihood_curves"] = report.likelihood_curves;
    j["monotone"] = report.monotone;
    return j.dump(2);
}

std::string pca_report_to_json(const PcaReport& report) {
    nlohmann::json j;
    j["k_values"] = report.k_values;
    j["recon_error"] = report.recon_error;
    j["explained_variance_ratio"] = report.explained_variance_ratio;
    return j.dump(2);
}

void save_geometry_csv(const GeometryReport& report, const Trajectory& traj,
                       const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write geometry file: " + path);

    out << "node,t,deviation,distance,eps_norm";
    for (double h : report.bandwidths) out << ",logp_h" << format_double(h);
    out << '\n';

    size_t eps_idx = 0;
    for (size_t n = 0; n < traj.states.size(); ++n) {
        out << n << ',' << format_double(traj.times[n]) << ','
            << format_double(report.deviation[n]) << ','
            << format_double(report.sample_distance[n]) << ',';
        if (traj.denoised[n] && eps_idx < report.eps_norms.size())
            out << format_double(report.eps_norms[eps_idx++]);
        for (const auto& curve : report.likelihood_curves)
            out << ',' << format_double(curve[n]);
        out << '\n';
    }
}

}  // namespace trajlab
