#pragma once

#include <string_view>
#include <vector>

#include "diurnal/activity.hpp"

namespace diurnal::rhythm {

/// Time of day `n` hours past `t`, in [0, 24).
double mod_time(double t, double n);

/// Whether `s` falls in the half-open window [t, t + n) on the 24 h circle.
/// Holds for exactly 4n of the 96 bin starts when t is a bin boundary.
bool in_window(double t, double s, double n);

struct WakeWindow {
    double onset = 0.0;          // hour, on a bin boundary
    double length_hours = 16.0;
    double window_sum = 0.0;
    bool degenerate = false;     // every onset ties (flat curve)

    double end() const { return mod_time(onset, length_hours); }
    std::size_t onset_bin() const { return bin_index_hours(onset); }
    std::size_t bin_count() const;
};

/// Onset maximising the circular rolling sum over round(4n) bins. Sums within
/// 1e-12 of the curve's absolute mass count as ties and resolve to the
/// earliest clock time.
WakeWindow heightened_window(const DiurnalCurve& curve, double n_hours = 16.0);

/// Circular left shift so that `reference_hour` maps to position 0.
DiurnalCurve align_by_reference(const DiurnalCurve& curve, double reference_hour);

enum class ExtremumKind : std::uint8_t { Max, Min };
std::string_view to_string(ExtremumKind k);

struct Extremum {
    double hour = 0.0;  // bin start
    double value = 0.0;
    ExtremumKind kind = ExtremumKind::Max;
};

/// Strict circular local maxima and minima, the `count` highest maxima
/// (descending) followed by the `count` lowest minima (ascending).
std::vector<Extremum> extract_extrema(const DiurnalCurve& curve, std::size_t count);

}  // namespace diurnal::rhythm
