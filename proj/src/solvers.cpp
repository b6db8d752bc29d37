#include "trajlab/solvers.hpp"

#include <array>
#include <cmath>
#include <deque>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace trajlab {

std::string to_string(Method m) {
    switch (m) {
        case Method::Euler: return "euler";
        case Method::Heun: return "heun";
        case Method::Dpm2: return "dpm2";
        case Method::Spndm: return "spndm";
        case Method::Ipndm: return "ipndm";
        case Method::DeisAb1: return "deis_ab1";
    }
    return "euler";
}

Method method_from_string(const std::string& s) {
    if (s == "euler") return Method::Euler;
    if (s == "heun") return Method::Heun;
    if (s == "dpm2") return Method::Dpm2;
    if (s == "spndm") return Method::Spndm;
    if (s == "ipndm") return Method::Ipndm;
    if (s == "deis_ab1") return Method::DeisAb1;
    throw std::domain_error("unknown solver method: " + s);
}

namespace {

void check_step_times(double t_cur, double t_next) {
    if (t_next > t_cur) throw std::domain_error("step: t_next must not exceed t_cur");
    if (t_next < 0.0) throw std::domain_error("step: t_next must be >= 0");
    if (t_cur <= 0.0) throw std::domain_error("step: t_cur must be positive");
}

}  // namespace

std::pair<Vec, DenoiserOutput> euler_step(const Denoiser& denoiser, const Vec& x,
                                          double t_cur, double t_next) {
    check_step_times(t_cur, t_next);
    DenoiserOutput out = denoiser.evaluate(x, t_cur);
    const double ratio = t_next / t_cur;
    Vec x_next = ratio * x + (1.0 - ratio) * out.r;
    return {std::move(x_next), std::move(out)};
}

SecondOrderResult second_order_step(const SolverSpec& spec, const Denoiser& denoiser,
                                    const Vec& x, double t_cur, double t_next,
                                    const std::optional<StepHistory>& history) {
    check_step_times(t_cur, t_next);
    const bool multistep = spec.method == Method::Spndm || spec.method == Method::DeisAb1;
    if (multistep && !history)
        throw std::invalid_argument("second_order_step: " + to_string(spec.method) +
                                    " requires the previous denoising output");

    SecondOrderResult res;
    res.current = denoiser.evaluate(x, t_cur);
    res.evals = 1;
    const Vec& r1 = res.current.r;
    const Vec& eps1 = res.current.eps;

    if (t_next == t_cur) {  // zero-length step
        res.x_next = x;
        return res;
    }

    const double dt = t_next - t_cur;  // negative

    if (spec.method == Method::Heun || spec.method == Method::Dpm2) {
        if (t_next <= 0.0)
            throw std::domain_error("second_order_step: " + to_string(spec.method) +
                                    " needs t_next > 0 for the second evaluation");
        // Intermediate evaluation point: the Euler prediction at t_next for
        // Heun, the geometric-mean midpoint for DPM-Solver-2.
        const double t_mid = spec.method == Method::Heun ? t_next : std::sqrt(t_cur * t_next);
        const Vec x_mid = x + (t_mid - t_cur) * eps1;
        const DenoiserOutput mid = denoiser.evaluate(x_mid, t_mid);
        res.evals = 2;
        const double span = spec.method == Method::Heun ? dt : dt / 2.0;

        if (spec.formulation == Formulation::Native) {
            res.x_next = x + dt * eps1 + 0.5 * dt * dt * (mid.eps - eps1) / span;
        } else {
            const double gamma = t_cur / t_mid;
            const Vec deriv = gamma * (mid.r - r1) / span;
            const Vec general = r1 + 0.5 * dt * deriv;
            const double ratio = t_next / t_cur;
            res.x_next = ratio * x + (1.0 - ratio) * general;
        }
        return res;
    }

    // Multistep variants: difference against the previous denoising output.
    const double t_prev = history->t_prev;
    if (t_prev <= t_cur)
        throw std::domain_error("second_order_step: history time must exceed t_cur");

    if (spec.formulation == Formulation::Native) {
        if (spec.method == Method::Spndm) {
            res.x_next = x + dt * 0.5 * (3.0 * eps1 - history->eps_prev);
        } else {  // DeisAb1: exact rhoAB1 integral coefficients
            const double c_cur = ((t_next - t_prev) * (t_next - t_prev) -
                                  (t_cur - t_prev) * (t_cur - t_prev)) /
                                 (2.0 * (t_cur - t_prev));
            const double c_prev = dt * dt / (2.0 * (t_prev - t_cur));
            res.x_next = x + c_cur * eps1 + c_prev * history->eps_prev;
        }
    } else {
        const double span = spec.method == Method::Spndm ? dt : t_cur - t_prev;
        const Vec deriv = (r1 - history->r_prev) / span;
        const Vec general = r1 + 0.5 * dt * deriv;
        const double ratio = t_next / t_cur;
        res.x_next = ratio * x + (1.0 - ratio) * general;
    }
    return res;
}

Vec afs_step(const Vec& x, double t_cur, double t_next) {
    check_step_times(t_cur, t_next);
    return x * (t_next / t_cur);
}

std::pair<Vec, DenoiserOutput> ipndm_step(const Denoiser& denoiser, const Vec& x,
                                          double t_cur, double t_next,
                                          const std::vector<Vec>& eps_history, int max_order) {
    check_step_times(t_cur, t_next);
    static const std::array<std::vector<double>, 4> kAbCoeffs = {{
        {1.0},
        {3.0 / 2.0, -1.0 / 2.0},
        {23.0 / 12.0, -16.0 / 12.0, 5.0 / 12.0},
        {55.0 / 24.0, -59.0 / 24.0, 37.0 / 24.0, -9.0 / 24.0},
    }};

    DenoiserOutput out = denoiser.evaluate(x, t_cur);
    const int order = std::clamp(max_order, 1, 4);
    const int used = std::min(static_cast<int>(eps_history.size()), order - 1);
    const auto& b = kAbCoeffs[static_cast<size_t>(used)];

    Vec incr = b[0] * out.eps;
    for (int j = 0; j < used; ++j) incr += b[static_cast<size_t>(j + 1)] * eps_history[static_cast<size_t>(j)];
    Vec x_next = x + (t_next - t_cur) * incr;
    return {std::move(x_next), std::move(out)};
}

namespace {

// Counts evaluations across a whole sample() run.
class CountingDenoiser final : public Denoiser {
public:
    explicit CountingDenoiser(const Denoiser& inner) : inner_(&inner) {}
    DenoiserOutput evaluate(const Vec& x, double sigma) const override {
        ++count_;
        return inner_->evaluate(x, sigma);
    }
    int count() const { return count_; }

private:
    const Denoiser* inner_;
    mutable int count_ = 0;
};

}  // namespace

Trajectory sample(const SolverSpec& spec, const Denoiser& denoiser,
                  const TimeSchedule& schedule, const Vec& x_init) {
    schedule.validate();
    const int n_steps = schedule.steps();
    CountingDenoiser counted(denoiser);

    Trajectory traj;
    traj.times = schedule.times;
    traj.states.reserve(n_steps + 1);
    traj.denoised.assign(n_steps + 1, std::nullopt);
    traj.states.push_back(x_init);

    Vec x = x_init;
    std::optional<StepHistory> history;          // spndm / deis_ab1
    std::deque<Vec> eps_history;                 // ipndm, most recent first

    for (int n = 0; n < n_steps; ++n) {
        const double t_cur = schedule.times[static_cast<size_t>(n)];
        const double t_next = schedule.times[static_cast<size_t>(n) + 1];
        try {
            if (spec.afs && n == 0) {
                x = afs_step(x, t_cur, t_next);
            } else {
                switch (spec.method) {
                    case Method::Euler: {
                        auto [x1, out] = euler_step(counted, x, t_cur, t_next);
                        x = std::move(x1);
                        traj.denoised[static_cast<size_t>(n)] = std::move(out.r);
                        break;
                    }
                    case Method::Heun:
                    case Method::Dpm2: {
                        if (n == n_steps - 1) {
                            // EDM convention: plain Euler at the final step.
                            auto [x1, out] = euler_step(counted, x, t_cur, t_next);
                            x = std::move(x1);
                            traj.denoised[static_cast<size_t>(n)] = std::move(out.r);
                        } else {
                            auto res = second_order_step(spec, counted, x, t_cur, t_next, std::nullopt);
                            x = std::move(res.x_next);
                            traj.denoised[static_cast<size_t>(n)] = std::move(res.current.r);
                        }
                        break;
                    }
                    case Method::Spndm:
                    case Method::DeisAb1: {
                        if (!history) {
                            auto [x1, out] = euler_step(counted, x, t_cur, t_next);
                            x = std::move(x1);
                            history = StepHistory{t_cur, out.r, out.eps};
                            traj.denoised[static_cast<size_t>(n)] = std::move(out.r);
                        } else {
                            auto res = second_order_step(spec, counted, x, t_cur, t_next, history);
                            x = std::move(res.x_next);
                            history = StepHistory{t_cur, res.current.r, res.current.eps};
                            traj.denoised[static_cast<size_t>(n)] = std::move(res.current.r);
                        }
                        break;
                    }
                    case Method::Ipndm: {
                        std::vector<Vec> hist(eps_history.begin(), eps_history.end());
                        auto [x1, out] = ipndm_step(counted, x, t_cur, t_next, hist, spec.order);
                        x = std::move(x1);
                        eps_history.push_front(out.eps);
                        const size_t keep = static_cast<size_t>(std::clamp(spec.order, 1, 4) - 1);
                        while (eps_history.size() > keep) eps_history.pop_back();
                        traj.denoised[static_cast<size_t>(n)] = std::move(out.r);
                        break;
                    }
                }
            }
        } catch (const std::exception& e) {
            throw std::runtime_error("sample: step " + std::to_string(n) + " (t=" +
                                     std::to_string(t_cur) + " -> " + std::to_string(t_next) +
                                     "): " + e.what());
        }
        traj.states.push_back(x);
    }
    traj.nfe = counted.count();
    return traj;
}

void save_trajectory_csv(const Trajectory& traj, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write trajectory file: " + path);
    if (traj.states.empty()) throw std::domain_error("save_trajectory_csv: empty trajectory");

    const int d = static_cast<int>(traj.states.front().size());
    bool any_r = false;
    for (const auto& r : traj.denoised) any_r = any_r || r.has_value();

    out << 't';
    for (int j = 0; j < d; ++j) out << ",x" << j;
    if (any_r)
        for (int j = 0; j < d; ++j) out << ",r" << j;
    out << '\n';

    for (size_t n = 0; n < traj.states.size(); ++n) {
        out << format_double(traj.times[n]);
        for (int j = 0; j < d; ++j) out << ',' << format_double(traj.states[n][j]);
        if (any_r) {
            for (int j = 0; j < d; ++j) {
                out << ',';
                if (traj.denoised[n]) out << format_double((*traj.denoised[n])[j]);
            }
        }
        out << '\n';
    }
}

Trajectory load_trajectory_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open trajectory file: " + path);

    std::string header;
    if (!std::getline(in, header)) throw std::runtime_error(path + ": empty trajectory file");
    int d = 0;
    bool has_r = false;
    {
        std::stringstream ss(header);
        std::string col;
        while (std::getline(ss, col, ',')) {
            if (col.size() > 1 && col[0] == 'x') ++d;
            if (col.size() > 1 && col[0] == 'r') has_r = true;
        }
        if (d == 0) throw std::runtime_error(path + ": malformed trajectory header");
    }

    Trajectory traj;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        while (static_cast<int>(cells.size()) < 1 + d + (has_r ? d : 0)) cells.emplace_back();

        traj.times.push_back(std::stod(cells[0]));
        Vec x(d);
        for (int j = 0; j < d; ++j) x[j] = std::stod(cells[static_cast<size_t>(1 + j)]);
        traj.states.push_back(std::move(x));
        if (has_r && !cells[static_cast<size_t>(1 + d)].empty()) {
            Vec r(d);
            for (int j = 0; j < d; ++j) r[j] = std::stod(cells[static_cast<size_t>(1 + d + j)]);
            traj.denoised.emplace_back(std::move(r));
        } else {
            traj.denoised.emplace_back(std::nullopt);
        }
    }
    if (traj.states.empty()) throw std::runtime_error(path + ": no trajectory rows");
    return traj;
}

}  // namespace trajlab
