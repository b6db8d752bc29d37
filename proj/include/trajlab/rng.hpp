#pragma once

#include <cstdint>
#include <random>

#include "trajlab/types.hpp"

namespace trajlab {

// splitmix64 step; used both as a generator and to mix seeds.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t s = seed ^ (0xD1B54A32D192ED03ull * (index + 1));
    return splitmix64(s);
}

// Deterministic random stream. Gaussian draws use the Marsaglia polar
// method so the sequence depends only on the engine state, not on the
// standard library's distribution internals.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : engine_(seed) {}

    // Independent stream for sample `index`; does not depend on how many
    // other streams were created.
    static RngStream for_sample(std::uint64_t seed, std::uint64_t index) {
        return RngStream(mix_seed(seed, index));
    }

    double uniform() {
        // 53-bit mantissa uniform in [0, 1)
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double gaussian() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double m = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * m;
        has_spare_ = true;
        return u * m;
    }

    Vec gaussian_vector(int d) {
        Vec z(d);
        for (int i = 0; i < d; ++i) z[i] = gaussian();
        return z;
    }

    std::uint64_t next_u64() { return engine_(); }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace trajlab
