#pragma once

#include <cstdint>
#include <optional>

#include "trajlab/dataset.hpp"
#include "trajlab/types.hpp"

namespace trajlab {

// Result of one denoiser evaluation at (x, sigma).
struct DenoiserOutput {
    Vec r;    // denoising output, a convex combination of data points
    Vec eps;  // noise prediction, eps = (x - r) / sigma
    std::optional<Vec> weights;  // softmax weights u_i, on request only
};

// Exact denoiser for the Gaussian-KDE data model:
//   r(x, sigma) = sum_i u_i y_i,  u_i = softmax_i(-|x - y_i|^2 / (2 sigma^2)).
// The softmax is evaluated in log space with the max subtracted, anchored at
// the nearest point (lowest index on ties), so it stays finite for any
// sigma > 0 and degenerates to exact nearest-neighbor as sigma -> 0.
DenoiserOutput optimal_denoise(const Dataset& data, const Vec& x, double sigma,
                               bool with_weights = false);

// log[(1/|I|) sum_i N(x; y_i, h^2 I)] with the exact Gaussian normalizer,
// computed via log-sum-exp.
double kde_log_density(const Dataset& data, const Vec& x, double h);

// One mean-shift step m(x, h); same weights as optimal_denoise at sigma = h
// (shared implementation, so the two agree bitwise).
Vec mean_shift_step(const Dataset& data, const Vec& x, double h);

// Abstract denoiser driving a sampler. Evaluations are pure.
struct Denoiser {
    virtual ~Denoiser() = default;
    virtual DenoiserOutput evaluate(const Vec& x, double sigma) const = 0;
};

class OptimalDenoiser final : public Denoiser {
public:
    explicit OptimalDenoiser(const Dataset& data) : data_(&data) {}
    DenoiserOutput evaluate(const Vec& x, double sigma) const override {
        return optimal_denoise(*data_, x, sigma);
    }
    const Dataset& dataset() const { return *data_; }

private:
    const Dataset* data_;
};

enum class DirectionMode { FixedRandom, PerQueryRandom };

// Controlled deviation from the exact denoiser:
//   r = r* + deviation_scale * |r* - x| * u_hat
// with u_hat a unit vector from a seeded stream, so d1 <= deviation_scale * d2
// by construction. Stands in for a trained network when checking the
// score-deviation diagnostics.
class PerturbedDenoiser final : public Denoiser {
public:
    PerturbedDenoiser(const Dataset& data, double deviation_scale, std::uint64_t rng_seed,
                      DirectionMode mode = DirectionMode::FixedRandom);

    DenoiserOutput evaluate(const Vec& x, double sigma) const override;

    double deviation_scale() const { return scale_; }

private:
    const Dataset* data_;
    double scale_;
    std::uint64_t seed_;
    DirectionMode mode_;
    mutable std::uint64_t query_counter_ = 0;  // PerQueryRandom only
};

}  // namespace trajlab
