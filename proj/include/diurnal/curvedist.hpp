#pragma once

#include <array>
#include <optional>
#include <span>
#include <string_view>

#include "diurnal/activity.hpp"

namespace diurnal::curvedist {

enum class MetricKind : std::uint8_t { PCM, DiscreteFrechet, AreaBetween, CurveLength, DTW, MAE, MSE };

inline constexpr std::array<MetricKind, 7> kAllMetrics = {
    MetricKind::PCM, MetricKind::DiscreteFrechet, MetricKind::AreaBetween, MetricKind::CurveLength,
    MetricKind::DTW, MetricKind::MAE,             MetricKind::MSE,
};

std::string_view to_string(MetricKind m);
std::optional<MetricKind> parse_metric(std::string_view s);

// All metrics treat a series as the polyline (i, y_i), i = 0..n-1. Inputs must
// have equal length; std::invalid_argument otherwise.

/// Partial curve mapping: both curves scaled by the ranges and arc length of
/// `a`; the shorter polyline slides along the longer one and the smallest
/// trapezoid-integrated pointwise gap over 200 offsets is returned.
/// Not symmetric.
double partial_curve_mapping(std::span<const double> a, std::span<const double> b);
double discrete_frechet(std::span<const double> a, std::span<const double> b);
/// Integral of |a - b| over the shared index axis with linear interpolation.
double area_between(std::span<const double> a, std::span<const double> b);
/// |arclength(a) - arclength(b)|.
double curve_length_difference(std::span<const double> a, std::span<const double> b);
/// Unconstrained DTW, absolute-difference local cost, summed along the path.
double dtw(std::span<const double> a, std::span<const double> b);
double mean_absolute_error(std::span<const double> a, std::span<const double> b);
double mean_squared_error(std::span<const double> a, std::span<const double> b);

double arc_length(std::span<const double> y);

double curve_distance(std::span<const double> a, std::span<const double> b, MetricKind metric);
inline double curve_distance(const DiurnalCurve& a, const DiurnalCurve& b, MetricKind metric) {
    return curve_distance(a.span(), b.span(), metric);
}

}  // namespace diurnal::curvedist
