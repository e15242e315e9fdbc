#include "diurnal/activity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "diurnal/timeutil.hpp"

namespace diurnal {

std::string_view to_string(CurveKind k) {
    switch (k) {
        case CurveKind::Raw: return "raw";
        case CurveKind::Smoothed: return "smoothed";
        case CurveKind::Spectral: return "spectral";
    }
    return "raw";
}

DiurnalCurve DiurnalCurve::from(std::span<const double> v, CurveKind kind) {
    if (v.size() != kBins)
        throw std::invalid_argument("curve needs " + std::to_string(kBins) + " bins, got " +
                                    std::to_string(v.size()));
    Values vals;
    std::copy(v.begin(), v.end(), vals.begin());
    return DiurnalCurve(vals, kind);
}

double DiurnalCurve::mass() const {
    return std::accumulate(values_.begin(), values_.end(), 0.0);
}

DiurnalCurve DiurnalCurve::shifted(long k) const {
    const long n = static_cast<long>(kBins);
    const long s = ((k % n) + n) % n;
    Values out;
    for (long b = 0; b < n; ++b) out[static_cast<std::size_t>((b + s) % n)] = values_[static_cast<std::size_t>(b)];
    return DiurnalCurve(out, kind_);
}

std::size_t bin_index(std::int32_t local_second) {
    return static_cast<std::size_t>(local_second / 900) % kBins;
}

std::size_t bin_index_hours(double hours) {
    const double h = std::fmod(std::fmod(hours, 24.0) + 24.0, 24.0);
    return std::min<std::size_t>(static_cast<std::size_t>(std::floor(h * 4.0)), kBins - 1);
}

std::array<std::uint32_t, kBins> user_bin_counts(const PostTable& posts, std::size_t user) {
    if (!posts.localized()) throw std::logic_error("post table must be localized before binning");
    std::array<std::uint32_t, kBins> counts{};
    const auto [first, last] = posts.user_rows(user);
    for (std::size_t r = first; r < last; ++r) ++counts[posts.bin(r)];
    return counts;
}

DiurnalCurve user_activity_curve(const PostTable& posts, std::size_t user) {
    if (user >= posts.user_count() || posts.user_post_count(user) == 0)
        throw DegenerateData("empty user");
    const auto counts = user_bin_counts(posts, user);
    const double total = static_cast<double>(posts.user_post_count(user));
    DiurnalCurve::Values v;
    for (std::size_t b = 0; b < kBins; ++b) v[b] = counts[b] / total;
    return DiurnalCurve(v, CurveKind::Raw);
}

DiurnalCurve user_activity_curve(const PostTable& posts, std::string_view user) {
    auto u = posts.user_index(user);
    if (!u) throw DegenerateData("empty user: " + std::string(user));
    return user_activity_curve(posts, *u);
}

DiurnalCurve cluster_activity_curve(const PostTable& posts, std::span<const std::size_t> members) {
    std::array<std::uint64_t, kBins> counts{};
    std::uint64_t total = 0;
    for (std::size_t u : members) {
        if (u >= posts.user_count()) continue;
        const auto c = user_bin_counts(posts, u);
        for (std::size_t b = 0; b < kBins; ++b) counts[b] += c[b];
        total += posts.user_post_count(u);
    }
    if (total == 0) throw DegenerateData("cluster has no posts");
    DiurnalCurve::Values v;
    for (std::size_t b = 0; b < kBins; ++b) v[b] = static_cast<double>(counts[b]) / static_cast<double>(total);
    return DiurnalCurve(v, CurveKind::Raw);
}

DiurnalCurve cluster_activity_curve(const PostTable& posts, const std::vector<std::string>& members) {
    std::vector<std::size_t> idx;
    for (const auto& m : members)
        if (auto u = posts.user_index(m)) idx.push_back(*u);
    return cluster_activity_curve(posts, idx);
}

SmoothingKernel gaussian_kernel(double window_minutes, double sigma_bins) {
    const double window_bins = window_minutes / 15.0;
    if (!(window_bins >= 1.0)) throw std::invalid_argument("smoothing window shorter than one bin");
    SmoothingKernel k;
    k.half_width = static_cast<int>(std::lround(window_bins / 2.0));
    if (sigma_bins <= 0.0) sigma_bins = window_bins / 4.0;
    k.taps.resize(static_cast<std::size_t>(2 * k.half_width + 1));
    double sum = 0.0;
    for (int j = -k.half_width; j <= k.half_width; ++j) {
        const double w = std::exp(-0.5 * (j / sigma_bins) * (j / sigma_bins));
        k.taps[static_cast<std::size_t>(j + k.half_width)] = w;
        sum += w;
    }
    for (auto& w : k.taps) w /= sum;
    return k;
}

DiurnalCurve circular_convolve(const DiurnalCurve& curve, const SmoothingKernel& kernel) {
    DiurnalCurve::Values out;
    const long n = static_cast<long>(kBins);
    for (long b = 0; b < n; ++b) {
        double acc = 0.0;
        for (int j = -kernel.half_width; j <= kernel.half_width; ++j) {
            const long src = ((b - j) % n + n) % n;
            acc += kernel.taps[static_cast<std::size_t>(j + kernel.half_width)] *
                   curve.values()[static_cast<std::size_t>(src)];
        }
        out[static_cast<std::size_t>(b)] = acc;
    }
    return DiurnalCurve(out, CurveKind::Smoothed);
}

DiurnalCurve gaussian_circular_smooth(const DiurnalCurve& curve, double window_minutes, double sigma_bins) {
    return circular_convolve(curve, gaussian_kernel(window_minutes, sigma_bins));
}

void write_curve_csv(std::ostream& out, const DiurnalCurve& curve) {
    out << "bin_start,value\n";
    for (std::size_t b = 0; b < kBins; ++b)
        out << format_hhmm(bin_start_hour(b)) << ',' << format_number(curve[b]) << '\n';
}

void write_curve_json(std::ostream& out, const DiurnalCurve& curve) {
    out << '[';
    for (std::size_t b = 0; b < kBins; ++b) out << (b ? "," : "") << format_number(curve[b]);
    out << ']';
}

}  // namespace diurnal
