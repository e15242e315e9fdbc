#include "diurnal/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace diurnal {

std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t stream) {
    // splitmix64 finaliser over the combined key
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double Rng::von_mises(double mu, double kappa) {
    constexpr double pi = std::numbers::pi;
    double theta;
    if (kappa < 1e-8) {
        theta = uniform(-pi, pi);
    } else {
        const double tau = 1.0 + std::sqrt(1.0 + 4.0 * kappa * kappa);
        const double rho = (tau - std::sqrt(2.0 * tau)) / (2.0 * kappa);
        const double r = (1.0 + rho * rho) / (2.0 * rho);
        double f;
        while (true) {
            const double u1 = uniform();
            const double z = std::cos(pi * u1);
            f = (1.0 + r * z) / (r + z);
            const double c = kappa * (r - f);
            const double u2 = uniform();
            if (c * (2.0 - c) - u2 > 0.0 || std::log(c / u2) + 1.0 - c >= 0.0) break;
        }
        const double u3 = uniform();
        theta = (u3 > 0.5 ? 1.0 : -1.0) * std::acos(std::clamp(f, -1.0, 1.0));
    }
    double a = std::remainder(mu + theta, 2.0 * pi);
    if (a <= -pi) a += 2.0 * pi;
    return a;
}

}  // namespace diurnal
