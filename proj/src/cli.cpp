#include "trajlab/cli.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "trajlab/denoise.hpp"
#include "trajlab/geometry.hpp"
#include "trajlab/gits.hpp"
#include "trajlab/rng.hpp"
#include "trajlab/verify.hpp"

namespace fs = std::filesystem;

namespace trajlab {

namespace {

// Stream domain tags so sample noise, warmup noise and perturbation seeds
// never collide.
constexpr std::uint64_t kSampleTag = 0x73616d706c65ull;
constexpr std::uint64_t kWarmupTag = 0x7761726d7570ull;

std::map<std::string, std::string> parse_kv(const std::string& body) {
    std::map<std::string, std::string> kv;
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos)
            throw std::domain_error("dataset spec: expected key=value, got '" + item + "'");
        kv[item.substr(0, eq)] = item.substr(eq + 1);
    }
    return kv;
}

int kv_int(const std::map<std::string, std::string>& kv, const std::string& key, int fallback) {
    auto it = kv.find(key);
    return it == kv.end() ? fallback : std::stoi(it->second);
}

double kv_double(const std::map<std::string, std::string>& kv, const std::string& key,
                 double fallback) {
    auto it = kv.find(key);
    return it == kv.end() ? fallback : std::stod(it->second);
}

std::string sample_filename(int index) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "sample_%04d.csv", index);
    return buf;
}

void ensure_out_dir(const std::string& dir) {
    if (!dir.empty()) fs::create_directories(dir);
}

void run_indexed(int count, int threads, const std::function<void(int)>& body) {
    threads = std::max(1, threads);
    if (threads == 1 || count <= 1) {
        for (int i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    for (int t = 0; t < std::min(threads, count); ++t)
        pool.emplace_back([&]() {
            for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) body(i);
        });
    for (auto& th : pool) th.join();
}

}  // namespace

Dataset resolve_dataset(const std::string& spec, std::uint64_t seed) {
    const auto colon = spec.find(':');
    const std::string head = colon == std::string::npos ? spec : spec.substr(0, colon);
    const std::string body = colon == std::string::npos ? "" : spec.substr(colon + 1);

    if (head == "csv") return load_dataset_csv(body);
    if (head == "gmm") {
        const auto kv = parse_kv(body);
        return make_gmm_dataset(kv_int(kv, "modes", 2), kv_int(kv, "d", 2),
                                kv_int(kv, "count", 16), kv_double(kv, "spread", 0.2), seed);
    }
    if (head == "plane") {
        const auto kv = parse_kv(body);
        return make_plane_dataset(kv_int(kv, "m", 2), kv_int(kv, "d", 512),
                                  kv_int(kv, "count", 64), seed);
    }
    if (head == "corners") {
        const auto kv = parse_kv(body);
        return make_hypercube_corner_dataset(kv_int(kv, "d", 1024), kv_int(kv, "count", 16), seed);
    }
    return load_dataset_csv(spec);  // bare path
}

TimeSchedule make_schedule(const RunConfig& config, int n_steps) {
    if (!config.schedule_file.empty()) return load_schedule_json(config.schedule_file);
    switch (config.schedule_kind) {
        case ScheduleKind::Uniform: return uniform_schedule(n_steps, config.t_min, config.t_max);
        case ScheduleKind::LogSnr: return logsnr_schedule(n_steps, config.t_min, config.t_max);
        case ScheduleKind::Polynomial:
            return polynomial_schedule(n_steps, config.t_min, config.t_max, config.rho);
        case ScheduleKind::Gits:
            throw std::domain_error("make_schedule: gits schedules come from `gits` output files");
        case ScheduleKind::Explicit:
            throw std::domain_error("make_schedule: explicit schedules need --schedule-file");
    }
    throw std::domain_error("make_schedule: unknown kind");
}

void cmd_sample(const RunConfig& config) {
    const Dataset data = resolve_dataset(config.dataset_spec, config.seed);
    const OptimalDenoiser denoiser(data);
    const TimeSchedule schedule = make_schedule(config, config.nfe);
    ensure_out_dir(config.out_dir);

    std::vector<double> endpoint_norms(static_cast<size_t>(config.batch));
    std::vector<int> nfes(static_cast<size_t>(config.batch));
    std::vector<std::string> files(static_cast<size_t>(config.batch));

    run_indexed(config.batch, config.threads, [&](int k) {
        RngStream rng = RngStream::for_sample(mix_seed(config.seed, kSampleTag),
                                              static_cast<std::uint64_t>(k));
        const Vec x_init = config.t_max * rng.gaussian_vector(data.dim());
        const Trajectory traj = sample(config.solver, denoiser, schedule, x_init);
        const std::string name = sample_filename(k);
        save_trajectory_csv(traj, (fs::path(config.out_dir) / name).string());
        endpoint_norms[static_cast<size_t>(k)] = traj.states.back().norm();
        nfes[static_cast<size_t>(k)] = traj.nfe;
        files[static_cast<size_t>(k)] = name;
    });

    nlohmann::json summary;
    summary["seed"] = config.seed;
    summary["batch"] = config.batch;
    summary["method"] = to_string(config.solver.method);
    summary["afs"] = config.solver.afs;
    summary["schedule_kind"] = to_string(schedule.kind);
    summary["steps"] = schedule.steps();
    summary["nfe"] = nfes;
    summary["endpoint_norms"] = endpoint_norms;
    summary["files"] = files;

    std::ofstream out(fs::path(config.out_dir) / "summary.json");
    if (!out) throw std::runtime_error("cannot write summary.json under " + config.out_dir);
    out << summary.dump(2) << '\n';
}

void cmd_gits(const RunConfig& config) {
    for (int budget : config.budgets)
        if (budget > config.teacher_nfe)
            throw std::domain_error("cmd_gits: budget " + std::to_string(budget) +
                                    " exceeds teacher NFE " + std::to_string(config.teacher_nfe));

    const Dataset data = resolve_dataset(config.dataset_spec, config.seed);
    const OptimalDenoiser denoiser(data);
    const FineGrid fine = FineGrid::make(config.teacher_nfe, config.t_min, config.t_max, config.rho);

    std::vector<Vec> warmup(static_cast<size_t>(config.warmup));
    for (int w = 0; w < config.warmup; ++w) {
        RngStream rng = RngStream::for_sample(mix_seed(config.seed, kWarmupTag),
                                              static_cast<std::uint64_t>(w));
        warmup[static_cast<size_t>(w)] = config.t_max * rng.gaussian_vector(data.dim());
    }

    const auto teachers = build_teacher(fine, denoiser, warmup, config.threads);
    const CostMatrix costs = build_cost_matrix(fine, denoiser, teachers, config.threads);

    ensure_out_dir(config.out_dir);
    if (config.dump_cost_matrix)
        save_cost_matrix_csv(costs, (fs::path(config.out_dir) / "cost_matrix.csv").string());

    int max_budget = 1;
    for (int budget : config.budgets) max_budget = std::max(max_budget, budget);
    const DpTable table(costs, max_budget, config.gamma);

    for (int budget : config.budgets) {
        DPResult res = table.extract(budget);
        nlohmann::json j = nlohmann::json::parse(schedule_to_json(res.schedule));
        j["path_indices"] = res.path_indices;
        j["total_cost"] = res.total_cost;
        j["warmup"] = config.warmup;
        j["teacher_nfe"] = config.teacher_nfe;

        const std::string name = "gits_nfe" + std::to_string(budget) + ".json";
        std::ofstream out(fs::path(config.out_dir) / name);
        if (!out) throw std::runtime_error("cannot write " + name + " under " + config.out_dir);
        out << j.dump(2) << '\n';
    }
}

void cmd_geometry(const RunConfig& config, const std::vector<std::string>& trajectory_files) {
    if (trajectory_files.empty()) throw std::domain_error("cmd_geometry: no trajectory files");
    const Dataset data = resolve_dataset(config.dataset_spec, config.seed);
    ensure_out_dir(config.out_dir);

    std::vector<Trajectory> trajs;
    trajs.reserve(trajectory_files.size());
    for (const auto& file : trajectory_files) {
        Trajectory traj = load_trajectory_csv(file);
        if (traj.states.front().size() != data.dim())
            throw std::domain_error("cmd_geometry: trajectory dimension " +
                                    std::to_string(traj.states.front().size()) +
                                    " does not match dataset dimension " +
                                    std::to_string(data.dim()));
        trajs.push_back(std::move(traj));
    }

    size_t min_nodes = trajs.front().states.size();
    for (const auto& traj : trajs) min_nodes = std::min(min_nodes, traj.states.size());

    for (size_t i = 0; i < trajs.size(); ++i) {
        const GeometryReport report = analyze_trajectory(trajs[i], data, config.bandwidths);
        const std::string stem = fs::path(trajectory_files[i]).stem().string();
        std::ofstream out(fs::path(config.out_dir) / ("geometry_" + stem + ".json"));
        out << geometry_report_to_json(report) << '\n';
        save_geometry_csv(report, trajs[i],
                          (fs::path(config.out_dir) / ("curves_" + stem + ".csv")).string());
    }

    const int k_max = std::max(1, std::min(5, static_cast<int>(min_nodes) - 1));
    const PcaReport pca = pca_reconstruct(trajs, k_max);
    std::ofstream out(fs::path(config.out_dir) / "pca_report.json");
    out << pca_report_to_json(pca) << '\n';
}

void cmd_schedule_print(const RunConfig& config, std::ostream& out) {
    out << schedule_to_json(make_schedule(config, config.nfe)) << '\n';
}

int cmd_verify(const RunConfig& config, std::ostream& out) {
    const auto results = run_verification(config.threads);
    return print_verification(results, out) ? 0 : 1;
}

}  // namespace trajlab
