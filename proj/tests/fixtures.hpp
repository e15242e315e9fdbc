#pragma once
// Small builders shared by the unit tests.

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "diurnal/activity.hpp"
#include "diurnal/ingest.hpp"

namespace fixtures {

using namespace diurnal;

struct Post {
    std::string user;
    std::size_t bin;  // local 15-minute bin
    ContentCategory category = ContentCategory::MainstreamMedia;
    int day = 0;      // day offset inside the span
    int second = 0;   // extra seconds inside the bin
};

inline const CivilDate kFirstDay{2021, 1, 4};
inline const CivilDate kEndDay{2021, 12, 27};

/// Builds a UTC-localized table from (user, bin, category) rows.
inline PostTable table_from(const std::vector<Post>& posts, CivilDate first = kFirstDay, CivilDate end = kEndDay) {
    const auto span = AnalysisSpan::from_dates(first, end);
    std::vector<PostRecord> rows;
    for (const auto& p : posts) {
        PostRecord r;
        r.user_id = p.user;
        r.timestamp = span.begin + static_cast<UnixSeconds>(p.day) * 86400 +
                      static_cast<UnixSeconds>(p.bin) * 900 + p.second;
        r.category = p.category;
        rows.push_back(r);
    }
    return localize(PostTable::build(std::move(rows), span), TzRule::parse("UTC"));
}

inline DiurnalCurve random_curve(std::mt19937_64& rng, double lo = 0.0, double hi = 1.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    DiurnalCurve c;
    for (std::size_t b = 0; b < kBins; ++b) c[b] = u(rng);
    return c;
}

inline DiurnalCurve cosine_curve(double amplitude, int harmonic, double phase = 0.0, double offset = 0.0) {
    DiurnalCurve c;
    for (std::size_t b = 0; b < kBins; ++b) {
        const double t = (static_cast<double>(b) + 0.5) / 4.0;
        c[b] = offset + amplitude * std::cos(2.0 * M_PI * harmonic * t / 24.0 - phase);
    }
    return c;
}

inline double max_abs_diff(const DiurnalCurve& a, const DiurnalCurve& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < kBins; ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace fixtures
