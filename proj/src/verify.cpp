#include "trajlab/verify.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <sstream>

#include "trajlab/cli.hpp"
#include "trajlab/dataset.hpp"
#include "trajlab/denoise.hpp"
#include "trajlab/geometry.hpp"
#include "trajlab/gits.hpp"
#include "trajlab/process.hpp"
#include "trajlab/rng.hpp"
#include "trajlab/schedule.hpp"
#include "trajlab/solvers.hpp"

namespace fs = std::filesystem;

namespace trajlab {

namespace {

struct Check {
    bool ok = true;
    std::ostringstream detail;

    void require(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            if (!detail.str().empty()) detail << "; ";
            detail << what;
        }
    }
};

double rel_gap(const Vec& a, const Vec& b) {
    const double denom = std::max({a.norm(), b.norm(), 1e-300});
    return (a - b).norm() / denom;
}

Vec gaussian_init(RngStream& rng, int d, double scale) {
    return scale * rng.gaussian_vector(d);
}

// ---------------------------------------------------------------------------
// 1. Handcrafted schedule tables, 4 decimal places.

const std::vector<std::vector<double>> kUniformTable = {
    {80.0000, 6.9503, 1.2867, 0.0020},
    {80.0000, 11.7343, 2.8237, 0.8565, 0.0020},
    {80.0000, 16.5063, 4.7464, 1.7541, 0.6502, 0.0020},
    {80.0000, 20.9656, 6.9503, 2.8237, 1.2867, 0.5272, 0.0020},
    {80.0000, 25.0154, 9.3124, 4.0679, 2.0043, 1.0249, 0.4447, 0.0020},
    {80.0000, 28.6496, 11.7343, 5.4561, 2.8237, 1.5621, 0.8565, 0.3852, 0.0020},
    {80.0000, 31.8981, 14.1472, 6.9503, 3.7419, 2.1599, 1.2867, 0.7382, 0.3401, 0.0020},
    {80.0000, 34.8018, 16.5063, 8.5141, 4.7464, 2.8237, 1.7541, 1.0985, 0.6502, 0.3047, 0.0020},
};

const std::vector<std::vector<double>> kLogSnrTable = {
    {80.0000, 2.3392, 0.0684, 0.0020},
    {80.0000, 5.6569, 0.4000, 0.0283, 0.0020},
    {80.0000, 9.6090, 1.1542, 0.1386, 0.0167, 0.0020},
    {80.0000, 13.6798, 2.3392, 0.4000, 0.0684, 0.0117, 0.0020},
    {80.0000, 17.6057, 3.8745, 0.8527, 0.1876, 0.0413, 0.0091, 0.0020},
    {80.0000, 21.2732, 5.6569, 1.5042, 0.4000, 0.1064, 0.0283, 0.0075, 0.0020},
    {80.0000, 24.6462, 7.5929, 2.3392, 0.7207, 0.2220, 0.0684, 0.0211, 0.0065, 0.0020},
    {80.0000, 27.7258, 9.6090, 3.3302, 1.1542, 0.4000, 0.1386, 0.0480, 0.0167, 0.0058, 0.0020},
};

const std::vector<std::vector<double>> kPolynomialTable = {
    {80.0000, 9.7232, 0.4700, 0.0020},
    {80.0000, 17.5278, 2.5152, 0.1698, 0.0020},
    {80.0000, 24.4083, 5.8389, 0.9654, 0.0851, 0.0020},
    {80.0000, 30.1833, 9.7232, 2.5152, 0.4700, 0.0515, 0.0020},
    {80.0000, 34.9922, 13.6986, 4.6371, 1.2866, 0.2675, 0.0352, 0.0020},
    {80.0000, 39.0167, 17.5278, 7.1005, 2.5152, 0.7434, 0.1698, 0.0261, 0.0020},
    {80.0000, 42.4152, 21.1087, 9.7232, 4.0661, 1.5017, 0.4700, 0.1166, 0.0204, 0.0020},
    {80.0000, 45.3137, 24.4083, 12.3816, 5.8389, 2.5152, 0.9654, 0.3183, 0.0851, 0.0167, 0.0020},
};

CriterionResult check_schedule_tables() {
    Check c;
    const auto compare = [&](const std::string& name, const std::vector<std::vector<double>>& table,
                             const std::function<TimeSchedule(int)>& gen) {
        for (size_t row = 0; row < table.size(); ++row) {
            const int n = static_cast<int>(row) + 3;
            const TimeSchedule s = gen(n);
            c.require(s.times.size() == table[row].size(), name + " N=" + std::to_string(n) + " size");
            for (size_t i = 0; i < table[row].size(); ++i) {
                const double err = std::abs(s.times[i] - table[row][i]);
                c.require(err <= 5e-5, name + " N=" + std::to_string(n) + " entry " +
                                           std::to_string(i) + " off by " + std::to_string(err));
            }
        }
    };
    compare("uniform", kUniformTable, [](int n) { return uniform_schedule(n); });
    compare("logsnr", kLogSnrTable, [](int n) { return logsnr_schedule(n); });
    compare("polynomial", kPolynomialTable, [](int n) { return polynomial_schedule(n); });
    return {1, "schedule tables N=3..10 reproduced to 4 decimals", c.ok, c.detail.str()};
}

// ---------------------------------------------------------------------------
// 2. Native vs generalized second-order formulations.

CriterionResult check_formulation_equivalence() {
    Check c;
    double worst = 0.0;
    for (int d : {2, 64}) {
        const Dataset data = make_gmm_dataset(2, d, 24, 0.2, 41);
        const OptimalDenoiser denoiser(data);
        RngStream rng(1201 + d);
        for (Method method : {Method::Heun, Method::Dpm2, Method::Spndm, Method::DeisAb1}) {
            for (int trial = 0; trial < 100; ++trial) {
                // Random descending triple in [t_min, t_max], log-uniform.
                double ts[3];
                for (double& t : ts) t = std::exp(std::log(0.002) + rng.uniform() * std::log(80.0 / 0.002));
                std::sort(ts, ts + 3);
                const double t_next = ts[0], t_cur = ts[1], t_prev = ts[2];

                const int row = static_cast<int>(rng.uniform() * data.count());
                std::optional<StepHistory> history;
                Vec x;
                if (method == Method::Spndm || method == Method::DeisAb1) {
                    // History produced by an Euler step, as the finite-difference
                    // rewrites assume.
                    const Vec x_prev =
                        data.points.row(row).transpose() + t_prev * rng.gaussian_vector(d);
                    auto [x_cur, out] = euler_step(denoiser, x_prev, t_prev, t_cur);
                    history = StepHistory{t_prev, out.r, out.eps};
                    x = std::move(x_cur);
                } else {
                    x = data.points.row(row).transpose() + t_cur * rng.gaussian_vector(d);
                }

                SolverSpec native{method, 4, false, Formulation::Native};
                SolverSpec general{method, 4, false, Formulation::Generalized};
                const Vec a = second_order_step(native, denoiser, x, t_cur, t_next, history).x_next;
                const Vec b = second_order_step(general, denoiser, x, t_cur, t_next, history).x_next;
                worst = std::max(worst, rel_gap(a, b));
            }
        }
    }
    c.require(worst < 1e-9, "worst relative gap " + std::to_string(worst));
    return {2, "native vs generalized second-order steps agree < 1e-9", c.ok, c.detail.str()};
}

// ---------------------------------------------------------------------------
// 3. Euler step to t = 0 returns the denoising output.

CriterionResult check_euler_jump_to_zero() {
    Check c;
    const Dataset data = make_gmm_dataset(2, 8, 16, 0.25, 7);
    const OptimalDenoiser denoiser(data);
    RngStream rng(77);
    for (int trial = 0; trial < 20; ++trial) {
        const double t = 0.01 + 10.0 * rng.uniform();
        const Vec x = gaussian_init(rng, 8, t);
        auto [x_next, out] = euler_step(denoiser, x, t, 0.0);
        c.require(rel_gap(x_next, out.r) <= 1e-12, "jump-to-zero gap above 1e-12");
    }
    return {3, "Euler step to t=0 equals the denoising output", c.ok, c.detail.str()};
}

// ---------------------------------------------------------------------------
// 4. VP <-> VE space equivalence.

CriterionResult check_space_equivalence() {
    Check c;
    for (int d : {2, 64}) {
        const Dataset data = make_gmm_dataset(2, d, 16, 0.2, 51);
        const OptimalDenoiser denoiser(data);
        RngStream rng(1600 + d);
        for (int steps : {5, 10}) {
            const TimeSchedule schedule = polynomial_schedule(steps);
            const Vec x_init = gaussian_init(rng, d, 80.0);
            for (const LinearScheme& scheme : {LinearScheme::ve(), LinearScheme::vp()}) {
                const double gap = verify_space_equivalence(scheme, denoiser, schedule.times, x_init);
                c.require(gap < 1e-9, "scheme discrepancy " + std::to_string(gap) + " (d=" +
                                          std::to_string(d) + ", N=" + std::to_string(steps) + ")");
            }
        }
    }
    return {4, "z-space semi-linear == x-space Euler sampling < 1e-9", c.ok, c.detail.str()};
}

// ---------------------------------------------------------------------------
// 5. KDE denoiser: Tweedie identity, hull membership, bandwidth limits.

CriterionResult check_denoiser_correctness() {
    Check c;
    const Dataset data = make_gmm_dataset(2, 2, 12, 0.25, 61);
    RngStream rng(6001);

    for (int q = 0; q < 50; ++q) {
        const double sigma = std::exp(std::log(0.05) + rng.uniform() * std::log(5.0 / 0.05));
        const int row = static_cast<int>(rng.uniform() * data.count());
        const Vec x = data.points.row(row).transpose() + sigma * rng.gaussian_vector(2);

        const Vec r = optimal_denoise(data, x, sigma).r;
        const double h_fd = 1e-5 * sigma;
        Vec grad(2);
        for (int j = 0; j < 2; ++j) {
            Vec xp = x, xm = x;
            xp[j] += h_fd;
            xm[j] -= h_fd;
            grad[j] = (kde_log_density(data, xp, sigma) - kde_log_density(data, xm, sigma)) /
                      (2.0 * h_fd);
        }
        const Vec r_fd = x + sigma * sigma * grad;
        const double rel = (r - r_fd).norm() / std::max(r.norm(), 1e-2);
        c.require(rel <= 1e-4, "Tweedie gap " + std::to_string(rel));
    }

    const Vec lo = data.coord_min(), hi = data.coord_max();
    for (int q = 0; q < 10000; ++q) {
        const double sigma = std::exp(std::log(1e-3) + rng.uniform() * std::log(1e6));
        Vec x(2);
        for (int j = 0; j < 2; ++j) x[j] = (2.0 * rng.uniform() - 1.0) * 4.0 * std::max(1.0, sigma);
        const Vec r = optimal_denoise(data, x, sigma).r;
        for (int j = 0; j < 2; ++j)
            c.require(r[j] >= lo[j] - 1e-12 && r[j] <= hi[j] + 1e-12, "hull violation");
    }

    for (int q = 0; q < 20; ++q) {
        const int row = static_cast<int>(rng.uniform() * data.count());
        Vec dir = rng.gaussian_vector(2);
        dir /= dir.norm();
        const Vec x = data.points.row(row).transpose() + 0.05 * dir;

        Eigen::Index nearest = 0;
        (data.points.rowwise() - x.transpose()).rowwise().squaredNorm().minCoeff(&nearest);
        const Vec y = data.points.row(nearest).transpose();
        const Vec r0 = optimal_denoise(data, x, 1e-6).r;
        c.require((r0 - y).norm() <= 1e-12 * std::max(1.0, y.norm()), "sigma->0 limit");

        const Vec rinf = optimal_denoise(data, x, 1e6).r;
        const Vec mean = data.mean();
        c.require((rinf - mean).norm() <= 1e-9 * std::max(1.0, mean.norm()), "sigma->inf limit");
    }
    return {5, "KDE denoiser: Tweedie 1e-4, hull membership, sigma limits", c.ok, c.detail.str()};
}

// ---------------------------------------------------------------------------
// 6. Likelihood monotonicity along optimal-denoiser Euler trajectories.

CriterionResult check_likelihood_monotonicity() {
    Check c;
    const Dataset data = make_gmm_dataset(2, 64, 32, 0.2, 555);
    const OptimalDenoiser denoiser(data);
    const TimeSchedule schedule = polynomial_schedule(50);
    // Bandwidth multipliers of the step's own noise level: the likelihood
    // ranking is coupled to the bandwidth the denoising output is computed
    // at, so each step is checked at h = c * sigma_{t_n}.
    const std::vector<double> multipliers = {0.1, 1.0, 10.0};
    RngStream rng(2203);

    for (int k = 0; k < 20; ++k) {
        const Vec x_init = gaussian_init(rng, 64, 80.0);
        const Trajectory traj = sample(SolverSpec{}, denoiser, schedule, x_init);
        for (double mult : multipliers) {
            for (size_t n = 0; n + 1 < traj.states.size(); ++n) {
                const double h = mult * traj.times[n];
                const double before = kde_log_density(data, traj.states[n], h);
                const double after = kde_log_density(data, traj.states[n + 1], h);
                c.require(after >= before - 1e-9,
                          "step likelihood drop at node " + std::to_string(n));
                if (traj.denoised[n]) {
                    const double denoised = kde_log_density(data, *traj.denoised[n], h);
                    c.require(denoised >= before - 1e-9, "denoised likelihood below state");
                }
            }
        }
    }
    return {6, "kde log-density monotone toward t_0; p_h(r) >= p_h(x)", c.ok, c.detail.str()};
}

// ---------------------------------------------------------------------------
// 7. Concentration of measure, trajectory length, eps-norm band.

CriterionResult check_concentration_and_length() {
    Check c;
    RngStream shell_rng(2024);
    const auto [mean_norm, sd_norm] = gaussian_shell_check(10000, 1.0, 2000, shell_rng);
    (void)sd_norm;
    c.require(mean_norm >= 99.5 && mean_norm <= 100.5,
              "shell mean " + std::to_string(mean_norm));

    {
        const Dataset data = make_hypercube_corner_dataset(1024, 16, 31);
        const OptimalDenoiser denoiser(data);
        const TimeSchedule schedule = polynomial_schedule(100);
        RngStream rng(7100);
        double mean_length = 0.0;
        const int reps = 4;
        for (int k = 0; k < reps; ++k) {
            const Trajectory traj = sample(SolverSpec{}, denoiser, schedule,
                                           gaussian_init(rng, 1024, 80.0));
            mean_length += length_and_angles(traj).first;
        }
        mean_length /= reps;
        const double target = 80.0 * std::sqrt(1024.0);
        c.require(std::abs(mean_length / target - 1.0) <= 0.05,
                  "length ratio " + std::to_string(mean_length / target));
    }

    {
        const int d = 512, m = 2;
        const Dataset data = make_plane_dataset(m, d, 64, 32);
        const OptimalDenoiser denoiser(data);
        const TimeSchedule schedule = polynomial_schedule(50);

        // Plane basis recovered from the data itself.
        Eigen::BDCSVD<Mat> svd(data.points, Eigen::ComputeThinV);
        const Mat basis = svd.matrixV().leftCols(m);

        RngStream rng(7200);
        int in_band = 0, total = 0;
        const double lower = std::sqrt(static_cast<double>(d - 2 * m));
        const double upper = std::sqrt(static_cast<double>(d)) + 3.0 * std::sqrt(2.0 * m);
        for (int k = 0; k < 2; ++k) {
            // Initial noise on the sigma_T sqrt(d) shell, orthogonal to the
            // data plane (the generic high-dimensional configuration).
            Vec z = rng.gaussian_vector(d);
            z -= basis * (basis.transpose() * z);
            const Vec x_init = 80.0 * std::sqrt(static_cast<double>(d)) * z / z.norm();
            const Trajectory traj = sample(SolverSpec{}, denoiser, schedule, x_init);
            for (double norm : eps_norm_profile(traj)) {
                ++total;
                if (norm >= lower && norm <= upper) ++in_band;
            }
        }
        c.require(total > 0 && in_band >= static_cast<int>(std::ceil(0.95 * total)),
                  "eps band fraction " + std::to_string(static_cast<double>(in_band) / total));
    }
    return {7, "shell mean in [99.5,100.5]; length within 5% of 80*sqrt(d); eps band", c.ok,
            c.detail.str()};
}

// ---------------------------------------------------------------------------
// 8. DP optimality against exhaustive enumeration.

// Enumerates every monotone path with exactly `budget` transitions and
// accumulates the cost from the final hop backward so totals share the DP
// recursion's association (required for the exact-equality comparison).
double brute_force_min_cost(const Mat& c, int n_t, int budget, double gamma) {
    double best = std::numeric_limits<double>::infinity();
    std::vector<int> path(static_cast<size_t>(budget) + 1);
    path[0] = 0;
    path[static_cast<size_t>(budget)] = n_t;
    std::function<void(int)> recurse = [&](int pos) {
        if (pos == budget) {
            double cost = c(path[static_cast<size_t>(budget) - 1], n_t);
            for (int k = budget - 2; k >= 0; --k)
                cost = gamma * c(path[static_cast<size_t>(k)], path[static_cast<size_t>(k) + 1]) + cost;
            best = std::min(best, cost);
            return;
        }
        for (int next = path[static_cast<size_t>(pos) - 1] + 1; next <= n_t - (budget - pos); ++next) {
            path[static_cast<size_t>(pos)] = next;
            recurse(pos + 1);
        }
    };
    if (budget == 1) {
        best = c(0, n_t);
    } else {
        recurse(1);
    }
    return best;
}

CriterionResult check_dp_optimality() {
    Check c;
    RngStream rng(8801);
    for (int nodes = 2; nodes <= 8; ++nodes) {
        const int n_t = nodes - 1;
        for (int trial = 0; trial < 4; ++trial) {
            CostMatrix costs;
            costs.grid_times.resize(static_cast<size_t>(nodes));
            for (int i = 0; i < nodes; ++i)
                costs.grid_times[static_cast<size_t>(i)] = 80.0 * std::pow(0.5, i);
            costs.batch = 1;
            costs.c = Mat::Constant(nodes, nodes, std::numeric_limits<double>::quiet_NaN());
            for (int i = 0; i < n_t; ++i)
                for (int j = i + 1; j <= n_t; ++j) costs.c(i, j) = rng.uniform();

            for (double gamma : {1.0, 1.15}) {
                for (int budget = 1; budget <= n_t && budget <= 7; ++budget) {
                    const DPResult res = dp_schedule(costs, budget, gamma);
                    const double brute = brute_force_min_cost(costs.c, n_t, budget, gamma);
                    c.require(res.total_cost == brute,
                              "size " + std::to_string(nodes) + " budget " + std::to_string(budget) +
                                  ": dp " + std::to_string(res.total_cost) + " vs brute " +
                                  std::to_string(brute));
                }
            }
        }
    }
    return {8, "DP total cost equals exhaustive enumeration exactly", c.ok, c.detail.str()};
}

// ---------------------------------------------------------------------------
// 9. GITS schedules vs handcrafted schedules on the exactly solvable model.

CriterionResult check_gits_beats_handcrafted(int threads) {
    Check c;
    const Dataset data = make_gmm_dataset(2, 64, 64, 0.15, 777);
    const OptimalDenoiser denoiser(data);
    const FineGrid fine = FineGrid::make(60);
    const TimeSchedule ref_schedule = polynomial_schedule(640);
    SolverSpec ref_spec;
    ref_spec.method = Method::Ipndm;
    ref_spec.order = 4;
    const SolverSpec euler_spec{};

    int successes = 0;
    const int reps = 10;
    for (int rep = 0; rep < reps; ++rep) {
        std::vector<Vec> warmup(64);
        for (int w = 0; w < 64; ++w) {
            RngStream rng = RngStream::for_sample(mix_seed(9000 + rep, 0x57), w);
            warmup[static_cast<size_t>(w)] = gaussian_init(rng, 64, 80.0);
        }
        const auto teachers = build_teacher(fine, denoiser, warmup, threads);
        const CostMatrix costs = build_cost_matrix(fine, denoiser, teachers, threads);
        const DpTable table(costs, 10, 1.15);

        std::vector<Vec> evals(64);
        for (int e = 0; e < 64; ++e) {
            RngStream rng = RngStream::for_sample(mix_seed(9500 + rep, 0x45), e);
            evals[static_cast<size_t>(e)] = gaussian_init(rng, 64, 80.0);
        }
        std::vector<Trajectory> reference(evals.size());
        for (size_t e = 0; e < evals.size(); ++e)
            reference[e] = sample(ref_spec, denoiser, ref_schedule, evals[e]);

        bool rep_ok = true;
        for (int nfe : {5, 10}) {
            const double err_gits =
                global_error(table.extract(nfe).schedule, euler_spec, denoiser, evals, reference);
            for (const TimeSchedule& hand :
                 {uniform_schedule(nfe), logsnr_schedule(nfe), polynomial_schedule(nfe)}) {
                const double err_hand =
                    global_error(hand, euler_spec, denoiser, evals, reference);
                if (!(err_gits <= err_hand)) rep_ok = false;
            }
        }
        if (rep_ok) ++successes;
    }
    c.require(successes >= 9, "only " + std::to_string(successes) + "/10 repetitions");
    return {9, "GITS <= uniform/logsnr/polynomial global error (>=9/10 reps)", c.ok,
            c.detail.str()};
}

// ---------------------------------------------------------------------------
// 10. Regularity analytics self-consistency.

CriterionResult check_regularity_selfconsistency() {
    Check c;
    const Dataset data = make_gmm_dataset(2, 16, 16, 0.25, 99);
    const OptimalDenoiser denoiser(data);
    const TimeSchedule schedule = polynomial_schedule(20);
    RngStream rng(4400);

    for (int k = 0; k < 3; ++k) {
        const Trajectory traj = sample(SolverSpec{}, denoiser, schedule, gaussian_init(rng, 16, 80.0));
        auto [dev, dist] = deviation_profile(traj);
        const double chord = dist.front() > 0.0 ? dist.front() : 1.0;
        c.require(dev.front() <= 1e-9 * std::max(1.0, chord), "start deviation nonzero");
        c.require(dev.back() <= 1e-9 * std::max(1.0, chord), "end deviation nonzero");

        const int nodes = static_cast<int>(traj.states.size());
        const int k_max = nodes - 2;
        const PcaReport pca = pca_reconstruct({traj}, k_max);
        for (size_t i = 0; i + 1 < pca.recon_error.size(); ++i)
            c.require(pca.recon_error[i + 1] <= pca.recon_error[i] + 1e-12,
                      "recon error increased at k=" + std::to_string(i + 2));

        double rms = 0.0;
        for (double v : dev) rms += v * v;
        rms = std::sqrt(rms / static_cast<double>(dev.size()));
        c.require(std::abs(pca.recon_error.front() - rms) <= 1e-9 * std::max(1.0, rms),
                  "k=1 recon error != RMS deviation");

        c.require(pca.explained_variance_ratio.back() >= 1.0 - 1e-9,
                  "explained variance did not reach 1 at full basis");
    }
    return {10, "deviation endpoints zero; PCA errors consistent", c.ok, c.detail.str()};
}

// ---------------------------------------------------------------------------
// 11. Byte-identical determinism of cmd_sample and cmd_gits.

std::string read_bytes(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

bool dirs_identical(const fs::path& a, const fs::path& b, std::string* why) {
    std::vector<fs::path> names;
    for (const auto& entry : fs::directory_iterator(a)) names.push_back(entry.path().filename());
    std::sort(names.begin(), names.end());
    for (const auto& name : names) {
        if (!fs::exists(b / name)) {
            *why = "missing " + name.string();
            return false;
        }
        if (read_bytes(a / name) != read_bytes(b / name)) {
            *why = "differs: " + name.string();
            return false;
        }
    }
    return true;
}

CriterionResult check_determinism() {
    Check c;
    const fs::path base = fs::temp_directory_path() / "trajlab_verify";
    fs::remove_all(base);

    RunConfig sample_cfg;
    sample_cfg.seed = 7;
    sample_cfg.dataset_spec = "gmm:modes=2,d=2,count=16,spread=0.2";
    sample_cfg.batch = 2;
    sample_cfg.nfe = 8;
    sample_cfg.threads = 1;

    for (const char* run : {"a", "b"}) {
        sample_cfg.out_dir = (base / "sample" / run).string();
        cmd_sample(sample_cfg);
    }
    std::string why;
    c.require(dirs_identical(base / "sample" / "a", base / "sample" / "b", &why),
              "cmd_sample " + why);

    RunConfig gits_cfg;
    gits_cfg.seed = 7;
    gits_cfg.dataset_spec = "gmm:modes=2,d=2,count=16,spread=0.2";
    gits_cfg.teacher_nfe = 20;
    gits_cfg.warmup = 4;
    gits_cfg.budgets = {5};
    gits_cfg.dump_cost_matrix = true;
    gits_cfg.threads = 1;

    for (const char* run : {"a", "b"}) {
        gits_cfg.out_dir = (base / "gits" / run).string();
        cmd_gits(gits_cfg);
    }
    c.require(dirs_identical(base / "gits" / "a", base / "gits" / "b", &why), "cmd_gits " + why);

    fs::remove_all(base);
    return {11, "cmd_sample and cmd_gits byte-identical across reruns", c.ok, c.detail.str()};
}

CriterionResult guard(int id, const std::string& name,
                      const std::function<CriterionResult()>& body) {
    try {
        return body();
    } catch (const std::exception& e) {
        return {id, name, false, std::string("exception: ") + e.what()};
    }
}

}  // namespace

std::vector<CriterionResult> run_verification(int threads) {
    std::vector<CriterionResult> results;
    results.push_back(guard(1, "schedule tables", check_schedule_tables));
    results.push_back(guard(2, "formulation equivalence", check_formulation_equivalence));
    results.push_back(guard(3, "euler jump to zero", check_euler_jump_to_zero));
    results.push_back(guard(4, "space equivalence", check_space_equivalence));
    results.push_back(guard(5, "denoiser correctness", check_denoiser_correctness));
    results.push_back(guard(6, "likelihood monotonicity", check_likelihood_monotonicity));
    results.push_back(guard(7, "concentration and length", check_concentration_and_length));
    results.push_back(guard(8, "dp optimality", check_dp_optimality));
    results.push_back(guard(9, "gits vs handcrafted", [&]() { return check_gits_beats_handcrafted(threads); }));
    results.push_back(guard(10, "regularity self-consistency", check_regularity_selfconsistency));
    results.push_back(guard(11, "determinism", check_determinism));
    return results;
}

bool print_verification(const std::vector<CriterionResult>& results, std::ostream& out) {
    bool all = true;
    for (const auto& res : results) {
        out << (res.passed ? "PASS" : "FAIL") << "  [" << std::setw(2) << res.id << "] "
            << res.name;
        if (!res.passed && !res.detail.empty()) out << "  -- " << res.detail;
        out << '\n';
        all = all && res.passed;
    }
    out << (all ? "all criteria passed" : "CRITERIA FAILED") << '\n';
    return all;
}

}  // namespace trajlab
