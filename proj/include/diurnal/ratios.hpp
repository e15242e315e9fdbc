#pragma once

#include <array>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "diurnal/activity.hpp"
#include "diurnal/ingest.hpp"

namespace diurnal::ratios {

/// Per-bin share of a category set among posts of known reliability,
/// with every post weighted by 1 / (its author's total posts).
struct RatioSeries {
    std::array<double, kBins> values{};
    std::array<bool, kBins> masked{};        // no weighted known-category posts
    std::array<double, kBins> numerator{};
    std::array<double, kBins> denominator{};
    CategorySet categories;
    CurveKind kind = CurveKind::Raw;
    std::string cluster;

    std::size_t unmasked_count() const;
    /// Values with masked bins filled by circular linear interpolation
    /// between the nearest unmasked neighbours; all zero if fully masked.
    DiurnalCurve filled() const;
};

/// 1 / total posts of the user. Throws DegenerateData for an empty user.
double user_weight(const PostTable& posts, std::size_t user);
double user_weight(const PostTable& posts, std::string_view user);

/// Eq.-style ratio with Other excluded from numerator and denominator.
/// `categories` must be a subset of the known categories.
RatioSeries ratio_series(const PostTable& posts, std::span<const std::size_t> members, CategorySet categories);

/// Day-total ratio (all bins pooled) of `categories` among known categories.
std::optional<double> pooled_ratio(const PostTable& posts, std::span<const std::size_t> members,
                                   CategorySet categories);

/// Q3 with linear interpolation between order statistics (position
/// 0.75 * (n - 1)).
double third_quartile(std::span<const double> values);

/// Bins whose smoothed ratio exceeds the third quartile of all unmasked
/// bins. Constant series give the empty set.
std::vector<std::size_t> susceptibility_windows(const RatioSeries& smoothed);
std::vector<std::size_t> susceptibility_windows(const DiurnalCurve& smoothed);

struct DateRange {
    CivilDate first;
    CivilDate last;  // inclusive
};

/// 9 March to 18 May 2020.
inline constexpr DateRange kItalianLockdown{{2020, 3, 9}, {2020, 5, 18}};

struct PeriodComparison {
    std::string label;
    std::size_t days_in = 0;
    std::size_t days_out = 0;
    double posts_per_day_user_in = 0.0;
    std::optional<double> posts_per_day_user_out;
    double disinfo_per_day_user_in = 0.0;
    std::optional<double> disinfo_per_day_user_out;
    std::optional<double> ratio_in;
    std::optional<double> ratio_out;

    std::optional<double> posts_delta() const;
    std::optional<double> disinfo_delta() const;
    std::optional<double> ratio_delta() const;
};

/// Posting rates and the weighted disinformative ratio inside versus
/// outside a local-date period. Throws std::invalid_argument for a period
/// that does not intersect the analysis span.
PeriodComparison period_comparison(const PostTable& posts, std::span<const std::size_t> members,
                                   DateRange period, std::string label = "lockdown");

struct DayNightSplit {
    std::vector<double> day;
    std::vector<double> night;
    std::vector<std::size_t> day_bins;
    std::vector<std::size_t> night_bins;
};

/// Partitions bin values into [start + margin, end - margin) ("day") and
/// [end + margin, start - margin) ("night") on the 24 h circle, dropping
/// margin bins and masked bins. Throws std::invalid_argument when either
/// side collapses.
DayNightSplit day_night_split(std::span<const double> values, std::span<const bool> masked, double start_hour,
                              double end_hour, double margin_hours);
DayNightSplit day_night_split(const RatioSeries& series, double start_hour, double end_hour, double margin_hours);

/// Month x bin matrix of the weighted ratio; rows are calendar months
/// of the analysis span in local time.
struct Heatmap {
    std::vector<CivilDate> months;  // first day of each month
    std::vector<RatioSeries> rows;
};

Heatmap monthly_heatmap(const PostTable& posts, std::span<const std::size_t> members, CategorySet categories);

void write_ratio_csv(std::ostream& out, const RatioSeries& raw, const DiurnalCurve* smoothed = nullptr);
void write_heatmap_csv(std::ostream& out, const Heatmap& heatmap);

}  // namespace diurnal::ratios
