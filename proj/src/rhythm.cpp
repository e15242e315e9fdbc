#include "diurnal/rhythm.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "diurnal/kernels.hpp"

namespace diurnal::rhythm {

double mod_time(double t, double n) {
    double r = std::fmod(t + n, 24.0);
    if (r < 0.0) r += 24.0;
    if (r >= 24.0) r -= 24.0;
    return r;
}

bool in_window(double t, double s, double n) {
    const double end = mod_time(t, n);
    if (t < end) return t <= s && s < end;
    return s >= t || s < end;
}

std::size_t WakeWindow::bin_count() const {
    return static_cast<std::size_t>(std::lround(length_hours * 4.0));
}

WakeWindow heightened_window(const DiurnalCurve& curve, double n_hours) {
    const auto width = static_cast<std::size_t>(std::lround(n_hours * 4.0));
    if (width < 1 || width >= kBins) throw std::invalid_argument("window length must be within (0, 24) hours");
    const auto best = kernels::best_window(curve.values(), width);
    WakeWindow w;
    w.onset = bin_start_hour(best.onset);
    w.length_hours = static_cast<double>(width) / 4.0;
    w.window_sum = best.sum;
    w.degenerate = best.all_tied;
    return w;
}

DiurnalCurve align_by_reference(const DiurnalCurve& curve, double reference_hour) {
    const long shift = static_cast<long>(bin_index_hours(reference_hour));
    return curve.shifted(-shift);
}

std::string_view to_string(ExtremumKind k) {
    return k == ExtremumKind::Max ? "max" : "min";
}

std::vector<Extremum> extract_extrema(const DiurnalCurve& curve, std::size_t count) {
    if (count < 1) throw std::invalid_argument("extrema count must be at least 1");
    std::vector<Extremum> maxima, minima;
    for (std::size_t b = 0; b < kBins; ++b) {
        const double prev = curve[b + kBins - 1];
        const double next = curve[b + 1];
        const double v = curve[b];
        if (v > prev && v > next) maxima.push_back({bin_start_hour(b), v, ExtremumKind::Max});
        if (v < prev && v < next) minima.push_back({bin_start_hour(b), v, ExtremumKind::Min});
    }
    std::stable_sort(maxima.begin(), maxima.end(), [](auto& a, auto& b) { return a.value > b.value; });
    std::stable_sort(minima.begin(), minima.end(), [](auto& a, auto& b) { return a.value < b.value; });
    if (maxima.size() > count) maxima.resize(count);
    if (minima.size() > count) minima.resize(count);
    maxima.insert(maxima.end(), minima.begin(), minima.end());
    return maxima;
}

}  // namespace diurnal::rhythm
