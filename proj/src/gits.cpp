#include "trajlab/gits.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <thread>

namespace trajlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void parallel_over(int count, int threads, const std::function<void(int)>& body) {
    threads = std::max(1, threads);
    if (threads == 1 || count <= 1) {
        for (int i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    for (int t = 0; t < std::min(threads, count); ++t) {
        pool.emplace_back([&]() {
            for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace

FineGrid FineGrid::make(int n_t, double t_min, double t_max, double rho) {
    FineGrid fine;
    fine.grid_times = polynomial_schedule(n_t, t_min, t_max, rho);
    fine.teacher_spec.method = Method::Ipndm;
    fine.teacher_spec.order = 4;
    return fine;
}

std::vector<Trajectory> build_teacher(const FineGrid& fine, const Denoiser& denoiser,
                                      const std::vector<Vec>& warmup, int threads) {
    if (warmup.empty()) throw std::domain_error("build_teacher: empty warmup batch");
    std::vector<Trajectory> teachers(warmup.size());
    parallel_over(static_cast<int>(warmup.size()), threads, [&](int i) {
        teachers[static_cast<size_t>(i)] =
            sample(fine.teacher_spec, denoiser, fine.grid_times, warmup[static_cast<size_t>(i)]);
    });
    return teachers;
}

CostMatrix build_cost_matrix(const FineGrid& fine, const Denoiser& denoiser,
                             const std::vector<Trajectory>& teachers, int threads) {
    if (teachers.empty()) throw std::domain_error("build_cost_matrix: no teacher trajectories");
    const auto& times = fine.grid_times.times;
    const int n = static_cast<int>(times.size());
    const long d = teachers.front().states.front().size();
    for (const auto& traj : teachers) {
        if (static_cast<int>(traj.states.size()) != n)
            throw std::domain_error("build_cost_matrix: teacher not on the fine grid");
        if (traj.states.front().size() != d)
            throw std::domain_error("build_cost_matrix: teacher dimension mismatch");
    }

    const int b = static_cast<int>(teachers.size());
    std::vector<Mat> partial(static_cast<size_t>(b));
    parallel_over(b, threads, [&](int w) {
        const Trajectory& ref = teachers[static_cast<size_t>(w)];
        Mat acc = Mat::Zero(n, n);
        for (int i = 0; i + 1 < n; ++i) {
            const Vec& x_i = ref.states[static_cast<size_t>(i)];
            // Reuse the teacher's own evaluation at this node when recorded.
            Vec r;
            if (ref.denoised[static_cast<size_t>(i)]) {
                r = *ref.denoised[static_cast<size_t>(i)];
            } else {
                r = denoiser.evaluate(x_i, times[static_cast<size_t>(i)]).r;
            }
            for (int j = i + 1; j < n; ++j) {
                // Same convex-combination arithmetic as euler_step, so an
                // Euler teacher costs exactly zero on its own grid steps.
                const double ratio = times[static_cast<size_t>(j)] / times[static_cast<size_t>(i)];
                const Vec pred = ratio * x_i + (1.0 - ratio) * r;
                acc(i, j) = (pred - ref.states[static_cast<size_t>(j)]).norm();
            }
        }
        partial[static_cast<size_t>(w)] = std::move(acc);
    });

    CostMatrix costs;
    costs.grid_times = times;
    costs.batch = b;
    costs.c = Mat::Constant(n, n, std::numeric_limits<double>::quiet_NaN());
    for (int i = 0; i + 1 < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            double sum = 0.0;
            for (int w = 0; w < b; ++w) sum += partial[static_cast<size_t>(w)](i, j);
            costs.c(i, j) = sum / b;
        }
    }
    return costs;
}

DpTable::DpTable(const CostMatrix& costs, int max_budget, double gamma)
    : costs_(&costs), max_budget_(max_budget), gamma_(gamma) {
    const int n_t = costs.nodes() - 1;
    if (max_budget < 1 || max_budget > n_t)
        throw std::domain_error("DpTable: budget must lie in [1, N_t]");
    if (!(gamma > 0.0)) throw std::domain_error("DpTable: gamma must be positive");

    const auto& c = costs.c;
    value_ = Mat::Constant(n_t + 1, max_budget + 1, kInf);
    // Exactly one transition left: jump straight to the last node, unscaled.
    for (int i = 0; i < n_t; ++i) value_(i, 1) = c(i, n_t);
    for (int k = 2; k <= max_budget; ++k) {
        for (int j = 0; j < n_t; ++j) {
            double best = kInf;
            for (int i = j + 1; i < n_t; ++i) {
                const double cand = gamma_ * c(j, i) + value_(i, k - 1);
                if (cand < best) best = cand;
            }
            value_(j, k) = best;
        }
    }
}

DPResult DpTable::extract(int budget) const {
    const int n_t = costs_->nodes() - 1;
    if (budget < 1 || budget > max_budget_)
        throw std::domain_error("DpTable::extract: budget outside the filled range");
    if (!std::isfinite(value_(0, budget)))
        throw std::domain_error("DpTable::extract: no feasible path for this budget");

    DPResult res;
    res.value = value_;
    res.total_cost = value_(0, budget);
    res.path_indices = {0};

    // Fetch loop: first index matching the stored optimum wins.
    int m = 0;
    for (int k = budget; k >= 2; --k) {
        for (int j = m + 1; j < n_t; ++j) {
            if (value_(m, k) == gamma_ * costs_->c(m, j) + value_(j, k - 1)) {
                res.path_indices.push_back(j);
                m = j;
                break;
            }
        }
    }
    res.path_indices.push_back(n_t);
    if (static_cast<int>(res.path_indices.size()) != budget + 1)
        throw std::logic_error("DpTable::extract: path reconstruction failed");

    res.schedule.kind = ScheduleKind::Gits;
    res.schedule.params = {{"gamma", gamma_}, {"budget", static_cast<double>(budget)}};
    res.schedule.times.reserve(res.path_indices.size());
    for (int idx : res.path_indices)
        res.schedule.times.push_back(costs_->grid_times[static_cast<size_t>(idx)]);
    res.schedule.validate();
    return res;
}

DPResult dp_schedule(const CostMatrix& costs, int budget_nfe, double gamma) {
    return DpTable(costs, budget_nfe, gamma).extract(budget_nfe);
}

double global_error(const TimeSchedule& schedule, const SolverSpec& spec,
                    const Denoiser& denoiser, const std::vector<Vec>& x_inits,
                    const std::vector<Trajectory>& reference) {
    if (x_inits.size() != reference.size())
        throw std::domain_error("global_error: reference count does not match x_inits");

    double sum = 0.0;
    for (size_t k = 0; k < x_inits.size(); ++k) {
        if (!reference[k].states.front().isApprox(x_inits[k], 0.0))
            throw std::domain_error("global_error: reference trajectory has different init");
        const Trajectory traj = sample(spec, denoiser, schedule, x_inits[k]);
        sum += (traj.states.back() - reference[k].states.back()).norm();
    }
    return sum / static_cast<double>(x_inits.size());
}

void save_cost_matrix_csv(const CostMatrix& costs, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write cost matrix file: " + path);
    const int n = costs.nodes();
    for (int i = 0; i + 1 < n; ++i) {
        out << i;
        for (int j = i + 1; j < n; ++j) out << ',' << format_double(costs.c(i, j));
        out << '\n';
    }
}

}  // namespace trajlab
