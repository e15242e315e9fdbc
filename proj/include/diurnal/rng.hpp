#pragma once

#include <cstdint>
#include <random>

namespace diurnal {

/// Seed of substream `stream` under a master seed. Substreams let parallel
/// work draw the same numbers regardless of how it is chunked.
std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t stream);

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    Rng(std::uint64_t seed, std::uint64_t stream) : engine_(substream_seed(seed, stream)) {}

    /// Uniform on [0, 1).
    double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
    /// Uniform integer on [lo, hi].
    std::int64_t integer(std::int64_t lo, std::int64_t hi) {
        return std::uniform_int_distribution<std::int64_t>(lo, hi)(engine_);
    }
    double normal(double mean, double sd) { return std::normal_distribution<double>(mean, sd)(engine_); }
    bool bernoulli(double p) { return std::bernoulli_distribution(p)(engine_); }
    /// Von Mises angle in (-pi, pi] around `mu` (Best-Fisher rejection sampler).
    double von_mises(double mu, double kappa);

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
};

}  // namespace diurnal
