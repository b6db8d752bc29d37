#pragma once

#include <map>
#include <string>
#include <vector>

namespace trajlab {

enum class ScheduleKind { Uniform, LogSnr, Polynomial, Gits, Explicit };

std::string to_string(ScheduleKind kind);
ScheduleKind schedule_kind_from_string(const std::string& s);

// Strictly decreasing timestamps t_N .. t_0 driving a sampler.
// times[0] = t_max and times[N] = t_min, pinned exactly.
struct TimeSchedule {
    std::vector<double> times;
    ScheduleKind kind = ScheduleKind::Explicit;
    std::map<std::string, double> params;

    int steps() const { return static_cast<int>(times.size()) - 1; }
    void validate() const;  // throws std::domain_error on violation
};

// t_n = (t_min^(1/rho) + (n/N)(t_max^(1/rho) - t_min^(1/rho)))^rho
TimeSchedule polynomial_schedule(int n_steps, double t_min = 0.002, double t_max = 80.0,
                                 double rho = 7.0);

// lambda uniform on [-log t_max, -log t_min], t = exp(-lambda): a geometric
// progression with ratio (t_max/t_min)^(1/N).
TimeSchedule logsnr_schedule(int n_steps, double t_min = 0.002, double t_max = 80.0);

// tau uniform on [eps_s, 1] mapped through
//   t = sqrt(exp(beta_d tau^2 / 2 + beta_min tau) - 1)
// with beta_d = 2/(eps_s - 1) (log(1+t_min^2)/eps_s - log(1+t_max^2)) and
// beta_min = log(1+t_max^2) - beta_d/2; tau = 1 maps to t_max.
TimeSchedule uniform_schedule(int n_steps, double t_min = 0.002, double t_max = 80.0,
                              double eps_s = 0.001);

TimeSchedule explicit_schedule(std::vector<double> times_desc);

// JSON form {"kind": ..., "times": [...], "params": {...}}, times descending.
std::string schedule_to_json(const TimeSchedule& schedule);
TimeSchedule schedule_from_json(const std::string& text);
void save_schedule_json(const TimeSchedule& schedule, const std::string& path);
TimeSchedule load_schedule_json(const std::string& path);

}  // namespace trajlab
