#include "diurnal/ratios.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "diurnal/common.hpp"
#include "diurnal/rhythm.hpp"

namespace diurnal::ratios {

namespace {

using CatCounts = std::array<std::array<std::uint32_t, kCategoryCount>, kBins>;

// Per-bin, per-category counts of one user, optionally restricted to local days in [day_lo, day_hi].
CatCounts user_counts(const PostTable& posts, std::size_t u, std::int64_t day_lo, std::int64_t day_hi) {
    CatCounts c{};
    const auto [first, last] = posts.user_rows(u);
    for (std::size_t r = first; r < last; ++r) {
        const auto day = posts.local_day(r);
        if (day < day_lo || day > day_hi) continue;
        const auto cat = posts.category(r).value_or(ContentCategory::Other);
        ++c[posts.bin(r)][static_cast<std::size_t>(cat)];
    }
    return c;
}

RatioSeries build_series(const PostTable& posts, std::span<const std::size_t> members, CategorySet categories,
                         std::int64_t day_lo, std::int64_t day_hi) {
    if (!categories.subset_of(CategorySet::known()))
        throw std::invalid_argument("ratio categories must exclude Other");
    if (!posts.localized()) throw std::logic_error("post table must be localized");
    RatioSeries s;
    s.categories = categories;
    const CategorySet known = CategorySet::known();
    std::array<std::array<double, kBins>, kCategoryCount> per_cat{};
    for (std::size_t u : members) {
        if (u >= posts.user_count() || posts.user_post_count(u) == 0) continue;
        const double total = static_cast<double>(posts.user_post_count(u));
        const auto c = user_counts(posts, u, day_lo, day_hi);
        for (std::size_t b = 0; b < kBins; ++b) {
            std::uint32_t num = 0, den = 0;
            for (auto cat : kAllCategories) {
                const auto i = static_cast<std::size_t>(cat);
                const auto k = c[b][i];
                if (known.contains(cat)) den += k;
                if (categories.contains(cat)) {
                    num += k;
                    if (k) per_cat[i][b] += k / total;
                }
            }
            if (num) s.numerator[b] += num / total;
            if (den) s.denominator[b] += den / total;
        }
    }
    // A set's ratio is the sum of its single-category ratios in enum order,
    // so composite series equal the sum of their parts bit for bit.
    for (std::size_t b = 0; b < kBins; ++b) {
        s.masked[b] = !(s.denominator[b] > 0.0);
        s.values[b] = 0.0;
        if (s.masked[b]) continue;
        for (auto cat : kAllCategories)
            if (categories.contains(cat)) s.values[b] += per_cat[static_cast<std::size_t>(cat)][b] / s.denominator[b];
    }
    return s;
}

constexpr std::int64_t kAllDaysLo = std::numeric_limits<std::int64_t>::min();
constexpr std::int64_t kAllDaysHi = std::numeric_limits<std::int64_t>::max();

}  // namespace

std::size_t RatioSeries::unmasked_count() const {
    return static_cast<std::size_t>(std::count(masked.begin(), masked.end(), false));
}

DiurnalCurve RatioSeries::filled() const {
    DiurnalCurve out;
    std::vector<std::size_t> known;
    for (std::size_t b = 0; b < kBins; ++b)
        if (!masked[b]) known.push_back(b);
    if (known.empty()) return out;
    for (std::size_t b = 0; b < kBins; ++b) {
        if (!masked[b]) {
            out[b] = values[b];
            continue;
        }
        // Nearest unmasked neighbours going backwards and forwards around the circle.
        std::size_t back = 1, fwd = 1;
        while (masked[(b + kBins - back) % kBins]) ++back;
        while (masked[(b + fwd) % kBins]) ++fwd;
        const double lo = values[(b + kBins - back) % kBins];
        const double hi = values[(b + fwd) % kBins];
        const double t = static_cast<double>(back) / static_cast<double>(back + fwd);
        out[b] = lo + t * (hi - lo);
    }
    return out;
}

double user_weight(const PostTable& posts, std::size_t user) {
    if (user >= posts.user_count() || posts.user_post_count(user) == 0) throw DegenerateData("empty user");
    return 1.0 / static_cast<double>(posts.user_post_count(user));
}

double user_weight(const PostTable& posts, std::string_view user) {
    auto u = posts.user_index(user);
    if (!u) throw DegenerateData("empty user: " + std::string(user));
    return user_weight(posts, *u);
}

RatioSeries ratio_series(const PostTable& posts, std::span<const std::size_t> members, CategorySet categories) {
    return build_series(posts, members, categories, kAllDaysLo, kAllDaysHi);
}

namespace {

std::optional<double> pooled_ratio_days(const PostTable& posts, std::span<const std::size_t> members,
                                        CategorySet categories, std::int64_t lo, std::int64_t hi) {
    const auto s = build_series(posts, members, categories, lo, hi);
    double num = 0.0, den = 0.0;
    for (std::size_t b = 0; b < kBins; ++b) {
        num += s.numerator[b];
        den += s.denominator[b];
    }
    if (!(den > 0.0)) return std::nullopt;
    return num / den;
}

}  // namespace

std::optional<double> pooled_ratio(const PostTable& posts, std::span<const std::size_t> members,
                                   CategorySet categories) {
    return pooled_ratio_days(posts, members, categories, kAllDaysLo, kAllDaysHi);
}

double third_quartile(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("quartile of an empty sample");
    std::vector<double> v(values.begin(), values.end());
    std::sort(v.begin(), v.end());
    const double pos = 0.75 * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

std::vector<std::size_t> susceptibility_windows(const RatioSeries& smoothed) {
    std::vector<double> vals;
    for (std::size_t b = 0; b < kBins; ++b)
        if (!smoothed.masked[b]) vals.push_back(smoothed.values[b]);
    std::vector<std::size_t> out;
    if (vals.empty()) return out;
    const double q3 = third_quartile(vals);
    for (std::size_t b = 0; b < kBins; ++b)
        if (!smoothed.masked[b] && smoothed.values[b] > q3) out.push_back(b);
    return out;
}

std::vector<std::size_t> susceptibility_windows(const DiurnalCurve& smoothed) {
    RatioSeries s;
    s.values = smoothed.values();
    s.kind = smoothed.kind();
    return susceptibility_windows(s);
}

std::optional<double> PeriodComparison::posts_delta() const {
    if (!posts_per_day_user_out) return std::nullopt;
    return posts_per_day_user_in - *posts_per_day_user_out;
}

std::optional<double> PeriodComparison::disinfo_delta() const {
    if (!disinfo_per_day_user_out) return std::nullopt;
    return disinfo_per_day_user_in - *disinfo_per_day_user_out;
}

std::optional<double> PeriodComparison::ratio_delta() const {
    if (!ratio_in || !ratio_out) return std::nullopt;
    return *ratio_in - *ratio_out;
}

PeriodComparison period_comparison(const PostTable& posts, std::span<const std::size_t> members,
                                   DateRange period, std::string label) {
    if (!posts.localized()) throw std::logic_error("post table must be localized");
    const std::int64_t span_lo = posts.span().begin / 86400;
    const std::int64_t span_hi = (posts.span().end + 86399) / 86400 - 1;
    const std::int64_t lo = std::max(days_from_civil(period.first), span_lo);
    const std::int64_t hi = std::min(days_from_civil(period.last), span_hi);
    if (hi < lo) throw std::invalid_argument("period " + label + " does not intersect the analysis span");

    PeriodComparison pc;
    pc.label = std::move(label);
    pc.days_in = static_cast<std::size_t>(hi - lo + 1);
    pc.days_out = static_cast<std::size_t>(span_hi - span_lo + 1) - pc.days_in;

    std::size_t n_in = 0, n_out = 0, h_in = 0, h_out = 0, users = 0;
    for (std::size_t u : members) {
        if (u >= posts.user_count()) continue;
        ++users;
        const auto [first, last] = posts.user_rows(u);
        for (std::size_t r = first; r < last; ++r) {
            const bool inside = posts.local_day(r) >= lo && posts.local_day(r) <= hi;
            const bool disinfo = is_disinformative(posts.category(r).value_or(ContentCategory::Other));
            (inside ? n_in : n_out) += 1;
            if (disinfo) (inside ? h_in : h_out) += 1;
        }
    }
    const double u = static_cast<double>(std::max<std::size_t>(users, 1));
    pc.posts_per_day_user_in = static_cast<double>(n_in) / (static_cast<double>(pc.days_in) * u);
    pc.disinfo_per_day_user_in = static_cast<double>(h_in) / (static_cast<double>(pc.days_in) * u);
    pc.ratio_in = pooled_ratio_days(posts, members, CategorySet::disinformative(), lo, hi);
    if (pc.days_out > 0) {
        pc.posts_per_day_user_out = static_cast<double>(n_out) / (static_cast<double>(pc.days_out) * u);
        pc.disinfo_per_day_user_out = static_cast<double>(h_out) / (static_cast<double>(pc.days_out) * u);
        // Outside = everything minus inside, evaluated as the complement day sets.
        auto before = build_series(posts, members, CategorySet::disinformative(), kAllDaysLo, lo - 1);
        auto after = build_series(posts, members, CategorySet::disinformative(), hi + 1, kAllDaysHi);
        double num = 0.0, den = 0.0;
        for (std::size_t b = 0; b < kBins; ++b) {
            num += before.numerator[b] + after.numerator[b];
            den += before.denominator[b] + after.denominator[b];
        }
        if (den > 0.0) pc.ratio_out = num / den;
    }
    return pc;
}

DayNightSplit day_night_split(std::span<const double> values, std::span<const bool> masked, double start_hour,
                              double end_hour, double margin_hours) {
    if (values.size() != kBins || masked.size() != kBins) throw std::invalid_argument("day/night split needs 96 bins");
    if (margin_hours < 0.0) throw std::invalid_argument("negative margin");
    const double day_len = rhythm::mod_time(end_hour - start_hour, 0.0);
    const double night_len = 24.0 - day_len;
    if (!(day_len > 0.0) || day_len - 2.0 * margin_hours <= 0.0 || night_len - 2.0 * margin_hours <= 0.0)
        throw std::invalid_argument("day/night windows collapse after applying the margin");
    const double day_start = rhythm::mod_time(start_hour, margin_hours);
    const double night_start = rhythm::mod_time(end_hour, margin_hours);
    DayNightSplit out;
    for (std::size_t b = 0; b < kBins; ++b) {
        if (masked[b]) continue;
        const double h = bin_start_hour(b);
        if (rhythm::in_window(day_start, h, day_len - 2.0 * margin_hours)) {
            out.day.push_back(values[b]);
            out.day_bins.push_back(b);
        } else if (rhythm::in_window(night_start, h, night_len - 2.0 * margin_hours)) {
            out.night.push_back(values[b]);
            out.night_bins.push_back(b);
        }
    }
    return out;
}

DayNightSplit day_night_split(const RatioSeries& series, double start_hour, double end_hour, double margin_hours) {
    return day_night_split(series.values, series.masked, start_hour, end_hour, margin_hours);
}

Heatmap monthly_heatmap(const PostTable& posts, std::span<const std::size_t> members, CategorySet categories) {
    Heatmap h;
    if (posts.span().end <= posts.span().begin) return h;
    const CivilDate first = civil_from_days(posts.span().begin / 86400);
    const CivilDate last = civil_from_days((posts.span().end - 1) / 86400);
    CivilDate m{first.year, first.month, 1};
    while (std::pair(m.year, m.month) <= std::pair(last.year, last.month)) {
        CivilDate next = m.month == 12 ? CivilDate{m.year + 1, 1, 1} : CivilDate{m.year, m.month + 1, 1};
        h.months.push_back(m);
        h.rows.push_back(build_series(posts, members, categories, days_from_civil(m), days_from_civil(next) - 1));
        m = next;
    }
    return h;
}

void write_ratio_csv(std::ostream& out, const RatioSeries& raw, const DiurnalCurve* smoothed) {
    out << "bin_start,ratio,masked,numerator,denominator" << (smoothed ? ",smoothed" : "") << '\n';
    for (std::size_t b = 0; b < kBins; ++b) {
        out << format_hhmm(bin_start_hour(b)) << ',' << (raw.masked[b] ? std::string("nan") : format_number(raw.values[b]))
            << ',' << (raw.masked[b] ? 1 : 0) << ',' << format_number(raw.numerator[b]) << ','
            << format_number(raw.denominator[b]);
        if (smoothed) out << ',' << format_number((*smoothed)[b]);
        out << '\n';
    }
}

void write_heatmap_csv(std::ostream& out, const Heatmap& heatmap) {
    out << "month";
    for (std::size_t b = 0; b < kBins; ++b) out << ',' << format_hhmm(bin_start_hour(b));
    out << '\n';
    for (std::size_t i = 0; i < heatmap.months.size(); ++i) {
        out << format_date(heatmap.months[i]).substr(0, 7);
        for (std::size_t b = 0; b < kBins; ++b)
            out << ',' << (heatmap.rows[i].masked[b] ? std::string("nan") : format_number(heatmap.rows[i].values[b]));
        out << '\n';
    }
}

}  // namespace diurnal::ratios
