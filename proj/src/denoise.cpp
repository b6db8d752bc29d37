#include "trajlab/denoise.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "trajlab/rng.hpp"

namespace trajlab {

namespace {

// Squared distances |x - y_i|^2 and the index of the nearest point
// (lowest index wins on exact ties).
Vec squared_distances(const Dataset& data, const Vec& x, Eigen::Index* argmin) {
    Vec d2 = (data.points.rowwise() - x.transpose()).rowwise().squaredNorm();
    d2.minCoeff(argmin);
    return d2;
}

}  // namespace

DenoiserOutput optimal_denoise(const Dataset& data, const Vec& x, double sigma,
                               bool with_weights) {
    if (sigma <= 0.0) throw std::domain_error("optimal_denoise: sigma must be positive");
    if (data.count() < 1) throw std::domain_error("optimal_denoise: empty dataset");
    if (x.size() != data.dim()) throw std::domain_error("optimal_denoise: dimension mismatch");
    if (!x.allFinite()) throw std::domain_error("optimal_denoise: non-finite query");

    Eigen::Index nearest = 0;
    const Vec d2 = squared_distances(data, x, &nearest);
    const double d2_min = d2[nearest];
    const double inv = 1.0 / (2.0 * sigma * sigma);

    // Logits shifted by the max: the anchor has weight exp(0) = 1, every
    // other term lies in [0, 1], so the sum never overflows or vanishes.
    const Eigen::Index n = d2.size();
    Vec w(n);
    double wsum = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double gap = (d2[i] - d2_min) * inv;  // >= 0, may be +inf
        w[i] = std::exp(-gap);
        wsum += w[i];
    }

    DenoiserOutput out;
    out.r = (w.transpose() * data.points).transpose() / wsum;
    out.eps = (x - out.r) / sigma;
    if (with_weights) out.weights = w / wsum;
    return out;
}

double kde_log_density(const Dataset& data, const Vec& x, double h) {
    if (h <= 0.0) throw std::domain_error("kde_log_density: bandwidth must be positive");
    if (x.size() != data.dim()) throw std::domain_error("kde_log_density: dimension mismatch");

    Eigen::Index nearest = 0;
    const Vec d2 = squared_distances(data, x, &nearest);
    const double d2_min = d2[nearest];
    const double inv = 1.0 / (2.0 * h * h);

    double sum = 0.0;
    for (Eigen::Index i = 0; i < d2.size(); ++i) sum += std::exp(-(d2[i] - d2_min) * inv);

    const double d = static_cast<double>(data.dim());
    const double log_norm = -0.5 * d * std::log(2.0 * M_PI * h * h);
    return -d2_min * inv + std::log(sum) + log_norm - std::log(static_cast<double>(data.count()));
}

Vec mean_shift_step(const Dataset& data, const Vec& x, double h) {
    return optimal_denoise(data, x, h).r;
}

PerturbedDenoiser::PerturbedDenoiser(const Dataset& data, double deviation_scale,
                                     std::uint64_t rng_seed, DirectionMode mode)
    : data_(&data), scale_(deviation_scale), seed_(rng_seed), mode_(mode) {
    if (deviation_scale < 0.0)
        throw std::domain_error("PerturbedDenoiser: deviation_scale must be >= 0");
}

DenoiserOutput PerturbedDenoiser::evaluate(const Vec& x, double sigma) const {
    DenoiserOutput out = optimal_denoise(*data_, x, sigma);
    if (scale_ == 0.0) return out;

    std::uint64_t h;
    if (mode_ == DirectionMode::FixedRandom) {
        // Hash of the query rounded to 1e-9 so repeated queries reproduce
        // the same direction.
        h = seed_ ^ 0x9E3779B97F4A7C15ull;
        for (Eigen::Index i = 0; i < x.size(); ++i) {
            const auto q = static_cast<std::uint64_t>(std::llround(x[i] * 1e9));
            h = splitmix64(h ^= q);
        }
        h = splitmix64(h ^= static_cast<std::uint64_t>(std::llround(sigma * 1e9)));
    } else {
        h = mix_seed(seed_, query_counter_++);
    }

    RngStream stream(h);
    Vec dir = stream.gaussian_vector(static_cast<int>(x.size()));
    const double n = dir.norm();
    if (n > 0.0) dir /= n;

    out.r += scale_ * (out.r - x).norm() * dir;
    out.eps = (x - out.r) / sigma;
    out.weights.reset();
    return out;
}

}  // namespace trajlab
