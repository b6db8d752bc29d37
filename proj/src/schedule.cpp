#include "trajlab/schedule.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace trajlab {

std::string to_string(ScheduleKind kind) {
    switch (kind) {
        case ScheduleKind::Uniform: return "uniform";
        case ScheduleKind::LogSnr: return "logsnr";
        case ScheduleKind::Polynomial: return "polynomial";
        case ScheduleKind::Gits: return "gits";
        case ScheduleKind::Explicit: return "explicit";
    }
    return "explicit";
}

ScheduleKind schedule_kind_from_string(const std::string& s) {
    if (s == "uniform") return ScheduleKind::Uniform;
    if (s == "logsnr") return ScheduleKind::LogSnr;
    if (s == "polynomial") return ScheduleKind::Polynomial;
    if (s == "gits") return ScheduleKind::Gits;
    if (s == "explicit") return ScheduleKind::Explicit;
    throw std::domain_error("unknown schedule kind: " + s);
}

void TimeSchedule::validate() const {
    if (times.size() < 2) throw std::domain_error("TimeSchedule: need at least 2 timestamps");
    for (size_t i = 0; i < times.size(); ++i) {
        if (!(times[i] > 0.0)) throw std::domain_error("TimeSchedule: timestamps must be positive");
        if (i + 1 < times.size() && times[i] <= times[i + 1])
            throw std::domain_error("TimeSchedule: timestamps must be strictly decreasing");
    }
}

namespace {

void check_bounds(int n_steps, double t_min, double t_max) {
    if (n_steps < 1) throw std::domain_error("schedule: n_steps must be >= 1");
    if (!(0.0 < t_min && t_min < t_max)) throw std::domain_error("schedule: need 0 < t_min < t_max");
}

}  // namespace

TimeSchedule polynomial_schedule(int n_steps, double t_min, double t_max, double rho) {
    check_bounds(n_steps, t_min, t_max);
    if (rho <= 0.0) throw std::domain_error("polynomial_schedule: rho must be positive");

    const double a = std::pow(t_min, 1.0 / rho);
    const double b = std::pow(t_max, 1.0 / rho);
    TimeSchedule s;
    s.kind = ScheduleKind::Polynomial;
    s.params = {{"rho", rho}, {"t_min", t_min}, {"t_max", t_max}};
    s.times.resize(n_steps + 1);
    for (int i = 0; i <= n_steps; ++i) {
        const int n = n_steps - i;  // descending output
        s.times[i] = std::pow(a + (static_cast<double>(n) / n_steps) * (b - a), rho);
    }
    s.times.front() = t_max;
    s.times.back() = t_min;
    s.validate();
    return s;
}

TimeSchedule logsnr_schedule(int n_steps, double t_min, double t_max) {
    check_bounds(n_steps, t_min, t_max);
    TimeSchedule s;
    s.kind = ScheduleKind::LogSnr;
    s.params = {{"t_min", t_min}, {"t_max", t_max}};
    s.times.resize(n_steps + 1);
    const double lmin = -std::log(t_max);
    const double lmax = -std::log(t_min);
    for (int i = 0; i <= n_steps; ++i) {
        const double lambda = lmin + (static_cast<double>(i) / n_steps) * (lmax - lmin);
        s.times[i] = std::exp(-lambda);
    }
    s.times.front() = t_max;
    s.times.back() = t_min;
    s.validate();
    return s;
}

TimeSchedule uniform_schedule(int n_steps, double t_min, double t_max, double eps_s) {
    check_bounds(n_steps, t_min, t_max);
    if (!(0.0 < eps_s && eps_s < 1.0)) throw std::domain_error("uniform_schedule: eps_s in (0,1)");

    // Evaluated in single precision: the reference implementation computes
    // this warp in float32 and the published schedules carry its rounding.
    const float e = static_cast<float>(eps_s);
    const float lo = static_cast<float>(t_min);
    const float hi = static_cast<float>(t_max);
    const float beta_d = 2.0f / (e - 1.0f) *
                         (std::log(lo * lo + 1.0f) / e - std::log(hi * hi + 1.0f));
    const float beta_min = std::log(hi * hi + 1.0f) - 0.5f * beta_d;

    TimeSchedule s;
    s.kind = ScheduleKind::Uniform;
    s.params = {{"eps_s", eps_s}, {"t_min", t_min}, {"t_max", t_max}};
    s.times.resize(n_steps + 1);
    for (int i = 0; i <= n_steps; ++i) {
        // tau descends from 1 (-> t_max) to eps_s (-> t_min)
        const float tau = e + (static_cast<float>(n_steps - i) / static_cast<float>(n_steps)) * (1.0f - e);
        s.times[i] = std::sqrt(std::exp(0.5f * beta_d * tau * tau + beta_min * tau) - 1.0f);
    }
    s.times.front() = t_max;
    s.times.back() = t_min;
    s.validate();
    return s;
}

TimeSchedule explicit_schedule(std::vector<double> times_desc) {
    TimeSchedule s;
    s.kind = ScheduleKind::Explicit;
    s.times = std::move(times_desc);
    s.validate();
    return s;
}

std::string schedule_to_json(const TimeSchedule& schedule) {
    nlohmann::json j;
    j["kind"] = to_string(schedule.kind);
    j["times"] = schedule.times;
    j["params"] = schedule.params;
    return j.dump(2);
}

TimeSchedule schedule_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    TimeSchedule s;
    s.kind = schedule_kind_from_string(j.at("kind").get<std::string>());
    s.times = j.at("times").get<std::vector<double>>();
    if (j.contains("params"))
        s.params = j.at("params").get<std::map<std::string, double>>();
    s.validate();
    return s;
}

void save_schedule_json(const TimeSchedule& schedule, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write schedule file: " + path);
    out << schedule_to_json(schedule) << '\n';
}

TimeSchedule load_schedule_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open schedule file: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return schedule_from_json(text);
}

}  // namespace trajlab
