#pragma once

// Data-parallel inner loops of the pipeline. Every kernel has a serial
// reference path and an OpenMP path; both produce bit-identical results
// for any thread count, because each output element is computed by exactly
// one iteration in a fixed order.

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "diurnal/activity.hpp"
#include "diurnal/ingest.hpp"

namespace diurnal::kernels {

enum class Exec : std::uint8_t { Serial, Parallel };

/// Sets the OpenMP worker count (no-op without OpenMP). 0 keeps the default.
void set_threads(int n);
int max_threads();

struct WindowBest {
    std::size_t onset = 0;
    double sum = 0.0;
    bool all_tied = false;
};

/// Circular window of `width` bins with the largest sum. Sums within
/// 1e-12 * sum|v| of the maximum tie and resolve to the lowest onset.
WindowBest best_window(std::span<const double> values, std::size_t width);

std::vector<WindowBest> best_windows(std::span<const DiurnalCurve> curves, std::size_t width, Exec exec);

/// Row-major n x n matrix of squared Euclidean distances.
std::vector<double> squared_distances(std::span<const DiurnalCurve> profiles, Exec exec);

using BinCounts = std::array<std::uint32_t, kBins>;

/// Per-bin post counts for the listed users.
std::vector<BinCounts> user_bin_counts(const PostTable& posts, std::span<const std::size_t> users, Exec exec);

/// Normalised and Gaussian-smoothed activity curve of each listed user.
std::vector<DiurnalCurve> smoothed_user_curves(const PostTable& posts, std::span<const std::size_t> users,
                                               const SmoothingKernel& kernel, Exec exec);

}  // namespace diurnal::kernels
