#include "diurnal/kernels.hpp"

#include <cmath>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace diurnal::kernels {

void set_threads(int n) {
#ifdef _OPENMP
    if (n > 0) omp_set_num_threads(n);
#else
    (void)n;
#endif
}

int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

WindowBest best_window(std::span<const double> values, std::size_t width) {
    const std::size_t n = values.size();
    if (n == 0 || width == 0 || width > n) throw std::invalid_argument("invalid window width");
    std::vector<double> sums(n);
    double s = 0.0, abs_mass = 0.0;
    for (std::size_t k = 0; k < width; ++k) s += values[k];
    for (double v : values) abs_mass += std::abs(v);
    sums[0] = s;
    for (std::size_t b = 1; b < n; ++b) {
        s += values[(b + width - 1) % n] - values[b - 1];
        sums[b] = s;
    }
    double top = sums[0];
    for (double v : sums) top = std::max(top, v);
    const double tol = 1e-12 * abs_mass;
    WindowBest best;
    best.all_tied = true;
    bool found = false;
    for (std::size_t b = 0; b < n; ++b) {
        if (sums[b] >= top - tol) {
            if (!found) {
                best.onset = b;
                best.sum = sums[b];
                found = true;
            }
        } else {
            best.all_tied = false;
        }
    }
    return best;
}

std::vector<WindowBest> best_windows(std::span<const DiurnalCurve> curves, std::size_t width, Exec exec) {
    std::vector<WindowBest> out(curves.size());
    const auto n = static_cast<std::int64_t>(curves.size());
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
        for (std::int64_t i = 0; i < n; ++i) out[i] = best_window(curves[i].span(), width);
    } else {
        for (std::int64_t i = 0; i < n; ++i) out[i] = best_window(curves[i].span(), width);
    }
    return out;
}

namespace {

double sq_dist(const DiurnalCurve& a, const DiurnalCurve& b) {
    double s = 0.0;
    for (std::size_t k = 0; k < kBins; ++k) {
        const double d = a[k] - b[k];
        s += d * d;
    }
    return s;
}

}  // namespace

std::vector<double> squared_distances(std::span<const DiurnalCurve> profiles, Exec exec) {
    const std::size_t n = profiles.size();
    std::vector<double> d(n * n, 0.0);
    const auto rows = static_cast<std::int64_t>(n);
    auto row = [&](std::int64_t i) {
        for (std::size_t j = static_cast<std::size_t>(i) + 1; j < n; ++j) {
            const double v = sq_dist(profiles[static_cast<std::size_t>(i)], profiles[j]);
            d[static_cast<std::size_t>(i) * n + j] = v;
            d[j * n + static_cast<std::size_t>(i)] = v;
        }
    };
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic, 16)
        for (std::int64_t i = 0; i < rows; ++i) row(i);
    } else {
        for (std::int64_t i = 0; i < rows; ++i) row(i);
    }
    return d;
}

std::vector<BinCounts> user_bin_counts(const PostTable& posts, std::span<const std::size_t> users, Exec exec) {
    if (!posts.localized()) throw std::logic_error("post table must be localized before binning");
    std::vector<BinCounts> out(users.size());
    const auto n = static_cast<std::int64_t>(users.size());
    auto one = [&](std::int64_t i) {
        BinCounts c{};
        const auto [first, last] = posts.user_rows(users[static_cast<std::size_t>(i)]);
        for (std::size_t r = first; r < last; ++r) ++c[posts.bin(r)];
        out[static_cast<std::size_t>(i)] = c;
    };
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic, 32)
        for (std::int64_t i = 0; i < n; ++i) one(i);
    } else {
        for (std::int64_t i = 0; i < n; ++i) one(i);
    }
    return out;
}

std::vector<DiurnalCurve> smoothed_user_curves(const PostTable& posts, std::span<const std::size_t> users,
                                               const SmoothingKernel& kernel, Exec exec) {
    const auto counts = user_bin_counts(posts, users, exec);
    std::vector<DiurnalCurve> out(users.size());
    const auto n = static_cast<std::int64_t>(users.size());
    auto one = [&](std::int64_t i) {
        const auto& c = counts[static_cast<std::size_t>(i)];
        const double total = static_cast<double>(posts.user_post_count(users[static_cast<std::size_t>(i)]));
        DiurnalCurve::Values v;
        for (std::size_t b = 0; b < kBins; ++b) v[b] = c[b] / total;
        out[static_cast<std::size_t>(i)] = circular_convolve(DiurnalCurve(v), kernel);
    };
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic, 32)
        for (std::int64_t i = 0; i < n; ++i) one(i);
    } else {
        for (std::int64_t i = 0; i < n; ++i) one(i);
    }
    return out;
}

}  // namespace diurnal::kernels
