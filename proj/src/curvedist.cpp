#include "diurnal/curvedist.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace diurnal::curvedist {

namespace {

void check_lengths(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        throw std::invalid_argument("curve length mismatch: " + std::to_string(a.size()) + " vs " +
                                    std::to_string(b.size()));
    if (a.empty()) throw std::invalid_argument("empty curve");
}

struct Polyline {
    std::vector<double> x, y, s;  // s: cumulative arc length
};

Polyline normalized(std::span<const double> y, double xscale, double ymin, double yscale) {
    Polyline p;
    const std::size_t n = y.size();
    p.x.resize(n);
    p.y.resize(n);
    p.s.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        p.x[i] = static_cast<double>(i) / xscale;
        p.y[i] = (y[i] - ymin) / yscale;
        if (i > 0) p.s[i] = p.s[i - 1] + std::hypot(p.x[i] - p.x[i - 1], p.y[i] - p.y[i - 1]);
    }
    return p;
}

// Point at arc length `s` along `p`, clamped to its ends.
std::pair<double, double> point_at(const Polyline& p, double s) {
    if (s <= 0.0) return {p.x.front(), p.y.front()};
    if (s >= p.s.back()) return {p.x.back(), p.y.back()};
    const auto it = std::upper_bound(p.s.begin(), p.s.end(), s);
    const std::size_t j = static_cast<std::size_t>(it - p.s.begin());
    const double seg = p.s[j] - p.s[j - 1];
    const double t = seg > 0.0 ? (s - p.s[j - 1]) / seg : 0.0;
    return {p.x[j - 1] + t * (p.x[j] - p.x[j - 1]), p.y[j - 1] + t * (p.y[j] - p.y[j - 1])};
}

}  // namespace

std::string_view to_string(MetricKind m) {
    switch (m) {
        case MetricKind::PCM: return "pcm";
        case MetricKind::DiscreteFrechet: return "frechet";
        case MetricKind::AreaBetween: return "area";
        case MetricKind::CurveLength: return "curve_length";
        case MetricKind::DTW: return "dtw";
        case MetricKind::MAE: return "mae";
        case MetricKind::MSE: return "mse";
    }
    return "mae";
}

std::optional<MetricKind> parse_metric(std::string_view s) {
    for (auto m : kAllMetrics)
        if (to_string(m) == s) return m;
    return std::nullopt;
}

double arc_length(std::span<const double> y) {
    double len = 0.0;
    for (std::size_t i = 1; i < y.size(); ++i) len += std::hypot(1.0, y[i] - y[i - 1]);
    return len;
}

double partial_curve_mapping(std::span<const double> a, std::span<const double> b) {
    check_lengths(a, b);
    if (a.size() < 2) return std::abs(a[0] - b[0]);
    const auto [lo, hi] = std::minmax_element(a.begin(), a.end());
    // A range at rounding level is a flat curve, not a scale.
    const double flat_tol = 1e-12 * (1.0 + std::max(std::abs(*lo), std::abs(*hi)));
    const double yscale = (*hi - *lo) > flat_tol ? (*hi - *lo) : 1.0;
    const double xscale = static_cast<double>(a.size() - 1);
    Polyline pa = normalized(a, xscale, *lo, yscale);
    Polyline pb = normalized(b, xscale, *lo, yscale);
    const double la = pa.s.back();
    for (auto& v : pa.s) v /= la;
    for (auto& v : pb.s) v /= la;

    const Polyline* shorter = &pa;
    const Polyline* longer = &pb;
    if (pa.s.back() > pb.s.back()) std::swap(shorter, longer);
    const double slack = longer->s.back() - shorter->s.back();

    const int steps = slack > 0.0 ? 200 : 1;
    double best = std::numeric_limits<double>::infinity();
    std::vector<double> d(shorter->s.size());
    for (int k = 0; k < steps; ++k) {
        const double offset = steps == 1 ? 0.0 : slack * k / (steps - 1);
        for (std::size_t i = 0; i < d.size(); ++i) {
            const auto [x, y] = point_at(*longer, offset + shorter->s[i]);
            d[i] = std::hypot(x - shorter->x[i], y - shorter->y[i]);
        }
        double area = 0.0;
        for (std::size_t i = 1; i < d.size(); ++i)
            area += 0.5 * (d[i - 1] + d[i]) * (shorter->s[i] - shorter->s[i - 1]);
        best = std::min(best, area);
    }
    return best;
}

double discrete_frechet(std::span<const double> a, std::span<const double> b) {
    check_lengths(a, b);
    const std::size_t n = a.size(), m = b.size();
    auto dist = [&](std::size_t i, std::size_t j) {
        return std::hypot(static_cast<double>(i) - static_cast<double>(j), a[i] - b[j]);
    };
    std::vector<double> prev(m), cur(m);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            const double d = dist(i, j);
            if (i == 0 && j == 0) cur[j] = d;
            else if (i == 0) cur[j] = std::max(cur[j - 1], d);
            else if (j == 0) cur[j] = std::max(prev[j], d);
            else cur[j] = std::max(std::min({prev[j], prev[j - 1], cur[j - 1]}), d);
        }
        std::swap(prev, cur);
    }
    return prev[m - 1];
}

double area_between(std::span<const double> a, std::span<const double> b) {
    check_lengths(a, b);
    double area = 0.0;
    for (std::size_t i = 1; i < a.size(); ++i) {
        const double d0 = a[i - 1] - b[i - 1];
        const double d1 = a[i] - b[i];
        const double s = std::abs(d0) + std::abs(d1);
        if (s == 0.0) continue;
        if ((d0 >= 0.0) == (d1 >= 0.0) || d0 == 0.0 || d1 == 0.0) area += 0.5 * s;
        else area += (d0 * d0 + d1 * d1) / (2.0 * s);  // segments cross once
    }
    return area;
}

double curve_length_difference(std::span<const double> a, std::span<const double> b) {
    check_lengths(a, b);
    return std::abs(arc_length(a) - arc_length(b));
}

double dtw(std::span<const double> a, std::span<const double> b) {
    check_lengths(a, b);
    const std::size_t n = a.size(), m = b.size();
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> prev(m + 1, inf), cur(m + 1, inf);
    prev[0] = 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
        cur[0] = inf;
        for (std::size_t j = 1; j <= m; ++j)
            cur[j] = std::abs(a[i - 1] - b[j - 1]) + std::min({prev[j], prev[j - 1], cur[j - 1]});
        std::swap(prev, cur);
    }
    return prev[m];
}

double mean_absolute_error(std::span<const double> a, std::span<const double> b) {
    check_lengths(a, b);
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
    return s / static_cast<double>(a.size());
}

double mean_squared_error(std::span<const double> a, std::span<const double> b) {
    check_lengths(a, b);
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return s / static_cast<double>(a.size());
}

double curve_distance(std::span<const double> a, std::span<const double> b, MetricKind metric) {
    for (std::size_t i = 0; i < a.size() && i < b.size(); ++i)
        if (!std::isfinite(a[i]) || !std::isfinite(b[i])) throw std::invalid_argument("non-finite curve value");
    switch (metric) {
        case MetricKind::PCM: return partial_curve_mapping(a, b);
        case MetricKind::DiscreteFrechet: return discrete_frechet(a, b);
        case MetricKind::AreaBetween: return area_between(a, b);
        case MetricKind::CurveLength: return curve_length_difference(a, b);
        case MetricKind::DTW: return dtw(a, b);
        case MetricKind::MAE: return mean_absolute_error(a, b);
        case MetricKind::MSE: return mean_squared_error(a, b);
    }
    throw std::invalid_argument("unknown metric");
}

}  // namespace diurnal::curvedist
