#pragma once

#include <array>
#include <ostream>
#include <span>
#include <string_view>
#include <vector>

#include "diurnal/common.hpp"
#include "diurnal/ingest.hpp"

namespace diurnal {

enum class CurveKind : std::uint8_t { Raw, Smoothed, Spectral };

std::string_view to_string(CurveKind k);

/// A 96-bin circular series over the day. Bin b covers [b/4, b/4 + 1/4) hours.
class DiurnalCurve {
public:
    using Values = std::array<double, kBins>;

    DiurnalCurve() { values_.fill(0.0); }
    explicit DiurnalCurve(const Values& v, CurveKind kind = CurveKind::Raw) : values_(v), kind_(kind) {}
    /// Throws std::invalid_argument unless `v` has exactly 96 entries.
    static DiurnalCurve from(std::span<const double> v, CurveKind kind = CurveKind::Raw);

    double operator[](std::size_t b) const { return values_[b % kBins]; }
    double& operator[](std::size_t b) { return values_[b % kBins]; }
    const Values& values() const { return values_; }
    std::span<const double> span() const { return values_; }
    CurveKind kind() const { return kind_; }
    void set_kind(CurveKind k) { kind_ = k; }

    double mass() const;
    /// Circular shift: result[b] = this[b - k].
    DiurnalCurve shifted(long k) const;

    friend bool operator==(const DiurnalCurve&, const DiurnalCurve&) = default;

private:
    Values values_{};
    CurveKind kind_ = CurveKind::Raw;
};

/// floor(4 * hours) for a local time of day given in seconds.
std::size_t bin_index(std::int32_t local_second);
/// Same, for a time of day in hours in [0, 24).
std::size_t bin_index_hours(double hours);
inline double bin_start_hour(std::size_t b) { return static_cast<double>(b) * kBinHours; }

/// Per-bin post counts of one user (all categories).
std::array<std::uint32_t, kBins> user_bin_counts(const PostTable& posts, std::size_t user);

/// Share of the user's posts falling in each bin. Throws DegenerateData for
/// a user without posts.
DiurnalCurve user_activity_curve(const PostTable& posts, std::string_view user);
DiurnalCurve user_activity_curve(const PostTable& posts, std::size_t user);

/// Posts pooled over the member users, normalised by the pooled total.
/// Heavy posters weigh more than light ones.
DiurnalCurve cluster_activity_curve(const PostTable& posts, std::span<const std::size_t> members);
DiurnalCurve cluster_activity_curve(const PostTable& posts, const std::vector<std::string>& members);

struct SmoothingKernel {
    std::vector<double> taps;  // centred, odd length, unit sum
    int half_width = 0;
};

/// Truncated Gaussian over round(window/15 min)/2 bins on each side.
/// Defaults give 7 taps with sigma = 1.5 bins.
SmoothingKernel gaussian_kernel(double window_minutes = 90.0, double sigma_bins = 0.0);

/// Circular convolution with a unit-sum truncated Gaussian. `sigma_bins` <= 0
/// selects window/4 in bins.
DiurnalCurve gaussian_circular_smooth(const DiurnalCurve& curve, double window_minutes = 90.0,
                                      double sigma_bins = 0.0);
DiurnalCurve circular_convolve(const DiurnalCurve& curve, const SmoothingKernel& kernel);

/// 96 rows of `HH:MM,value`.
void write_curve_csv(std::ostream& out, const DiurnalCurve& curve);
void write_curve_json(std::ostream& out, const DiurnalCurve& curve);

}  // namespace diurnal
