// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any fails. An optional argument names a replica post file;
// without it the replica-only golden values are reported as inactive.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "diurnal/activity.hpp"
#include "diurnal/clustering.hpp"
#include "diurnal/pipeline.hpp"
#include "diurnal/ratios.hpp"
#include "diurnal/report.hpp"
#include "diurnal/rhythm.hpp"
#include "diurnal/solar.hpp"
#include "diurnal/spectral.hpp"
#include "diurnal/stats.hpp"
#include "diurnal/synth.hpp"

using namespace diurnal;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

int failures = 0;

void report(int id, bool ok, const std::string& detail) {
    std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", id, detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

template <typename... Args>
std::string fmt(const char* f, Args... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

DiurnalCurve random_curve(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    DiurnalCurve c;
    for (std::size_t b = 0; b < kBins; ++b) c[b] = u(rng);
    return c;
}

// ---------------------------------------------------------------------------

void spectral_round_trip() {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(101);
    double worst = 0.0;
    std::size_t increases = 0;
    for (int i = 0; i < 1000; ++i) {
        const auto c = random_curve(rng);
        const auto s = spectral::dft_forward(c);
        const auto full = spectral::reconstruct_top_m(s, kBins / 2);
        for (std::size_t b = 0; b < kBins; ++b) worst = std::max(worst, std::abs(full[b] - c[b]));
        double prev = INFINITY;
        for (std::size_t m = 1; m <= kBins / 2; ++m) {
            const auto r = spectral::reconstruct_top_m(s, m);
            double mse = 0.0;
            for (std::size_t b = 0; b < kBins; ++b) mse += (r[b] - c[b]) * (r[b] - c[b]);
            mse /= static_cast<double>(kBins);
            if (mse > prev) ++increases;
            prev = mse;
        }
    }
    const double secs = seconds_since(t0);
    report(1, worst <= 1e-9 && increases == 0 && secs < 10.0,
           fmt("spectral round trip on 1000 curves: max abs error %.3g, MSE increases %zu, %.2f s", worst, increases,
               secs));
}

void harmonic_budget(const std::string& replica) {
    std::mt19937_64 rng(202);
    std::uniform_real_distribution<double> amp(0.5, 1.5), phase(0.0, 2.0 * M_PI), level(1.0, 3.0);
    std::uniform_int_distribution<int> harmonic(1, 4);
    int hits = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const int n1 = harmonic(rng);
        int n2 = harmonic(rng);
        while (n2 == n1) n2 = harmonic(rng);
        const double a1 = amp(rng), a2 = amp(rng), p1 = phase(rng), p2 = phase(rng), mean = level(rng);
        std::normal_distribution<double> noise(0.0, 0.05 * std::min(a1, a2));
        DiurnalCurve c;
        for (std::size_t b = 0; b < kBins; ++b) {
            const double t = (static_cast<double>(b) + 0.5) / 4.0;
            c[b] = mean + a1 * std::cos(2.0 * M_PI * n1 * t / 24.0 - p1) + a2 * std::cos(2.0 * M_PI * n2 * t / 24.0 - p2) +
                   noise(rng);
        }
        if (spectral::select_m(c).m == 2) ++hits;
    }
    std::string golden = "replica golden m=3 (activity) / m in {2,3} (ratios) inactive: no replica input";
    bool golden_ok = true;
    if (!replica.empty()) {
        RunConfig cfg;
        cfg.posts = replica;
        cfg.plots = false;
        const auto bundle = run_pipeline(cfg);
        golden = "replica";
        for (const auto& g : bundle.groups) {
            if (g.infrequent) continue;
            const bool ok = g.budget.m == 3 && (g.ratio_budget.m == 2 || g.ratio_budget.m == 3);
            golden_ok = golden_ok && ok;
            golden += fmt(" %s:m=%zu/%zu", g.name.c_str(), g.budget.m, g.ratio_budget.m);
        }
    }
    report(2, hits >= 95 && golden_ok,
           fmt("select_m returns 2 on %d/100 planted two-harmonic curves (noise 5%% of amplitude); ", hits) + golden);
}

void wake_window_oracle() {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(303);
    int mismatches = 0;
    for (int i = 0; i < 1000; ++i) {
        const auto c = random_curve(rng);
        double best = -INFINITY;
        std::size_t onset = 0;
        for (std::size_t s = 0; s < kBins; ++s) {
            double sum = 0.0;
            for (std::size_t j = 0; j < 64; ++j) sum += c[s + j];
            if (sum > best) {
                best = sum;
                onset = s;
            }
        }
        if (rhythm::heightened_window(c, 16.0).onset_bin() != onset) ++mismatches;
    }
    const double secs = seconds_since(t0);
    report(3, mismatches == 0 && secs < 5.0,
           fmt("wake window vs exhaustive scan on 1000 curves: %d mismatches, %.2f s", mismatches, secs));
}

// ---------------------------------------------------------------------------

struct NaiveMerge {
    std::set<std::size_t> members;
    double height;
};

std::vector<NaiveMerge> naive_ward(const std::vector<DiurnalCurve>& pts) {
    std::vector<std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < pts.size(); ++i) groups.push_back({i});
    auto centroid = [&](const std::vector<std::size_t>& g) {
        std::vector<double> c(kBins, 0.0);
        for (auto i : g)
            for (std::size_t t = 0; t < kBins; ++t) c[t] += pts[i][t];
        for (auto& v : c) v /= static_cast<double>(g.size());
        return c;
    };
    std::vector<NaiveMerge> out;
    while (groups.size() > 1) {
        double best = INFINITY;
        std::size_t ba = 0, bb = 0;
        for (std::size_t a = 0; a < groups.size(); ++a)
            for (std::size_t b = a + 1; b < groups.size(); ++b) {
                const auto ca = centroid(groups[a]), cb = centroid(groups[b]);
                double d = 0.0;
                for (std::size_t t = 0; t < kBins; ++t) d += (ca[t] - cb[t]) * (ca[t] - cb[t]);
                const double na = static_cast<double>(groups[a].size()), nb = static_cast<double>(groups[b].size());
                const double cost = 2.0 * na * nb / (na + nb) * d;
                if (cost < best) {
                    best = cost;
                    ba = a;
                    bb = b;
                }
            }
        NaiveMerge m;
        m.members.insert(groups[ba].begin(), groups[ba].end());
        m.members.insert(groups[bb].begin(), groups[bb].end());
        m.height = std::sqrt(best);
        out.push_back(m);
        groups[ba] = std::vector<std::size_t>(m.members.begin(), m.members.end());
        groups.erase(groups.begin() + static_cast<long>(bb));
    }
    return out;
}

void clustering_recovery() {
    const auto t0 = Clock::now();
    // Naive oracle on n = 30.
    std::mt19937_64 rng(404);
    std::size_t set_mismatch = 0;
    double worst_rel = 0.0;
    for (int rep = 0; rep < 5; ++rep) {
        std::vector<DiurnalCurve> pts;
        for (int i = 0; i < 30; ++i) pts.push_back(random_curve(rng));
        const auto fast = clustering::ward_dendrogram(pts);
        const auto slow = naive_ward(pts);
        std::vector<std::set<std::size_t>> sets(59);
        for (std::size_t i = 0; i < 30; ++i) sets[i] = {i};
        for (std::size_t s = 0; s < fast.size(); ++s) {
            sets[30 + s] = sets[fast[s].left];
            sets[30 + s].insert(sets[fast[s].right].begin(), sets[fast[s].right].end());
            if (sets[30 + s] != slow[s].members) ++set_mismatch;
            worst_rel = std::max(worst_rel, std::abs(fast[s].height - slow[s].height) / slow[s].height);
        }
    }

    int good = 0;
    std::string per_seed;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto spec = synth::chronotype_spec(300, 300, 400);
        const auto gen = synth::generate(spec, seed);
        const auto posts = localize(gen.posts, TzRule::parse(spec.tz));
        const auto model = clustering::cluster_users(posts);
        std::vector<int> truth;
        for (const auto& u : model.users) {
            const auto it = std::find(gen.users.begin(), gen.users.end(), u);
            truth.push_back(static_cast<int>(gen.population[static_cast<std::size_t>(it - gen.users.begin())]));
        }
        const double ari = clustering::adjusted_rand_index(model.labels, truth);
        const bool ok = model.choice.k == 3 && ari >= 0.9;
        good += ok ? 1 : 0;
        per_seed += fmt(" k=%zu/ARI=%.3f", model.choice.k, ari);
    }
    const double secs = seconds_since(t0);
    report(4, set_mismatch == 0 && worst_rel <= 1e-9 && good >= 9,
           fmt("Ward vs naive oracle (5 x n=30): %zu member-set mismatches, max height rel diff %.2g; "
               "planted chronotypes k=3 & ARI>=0.9 in %d/10 seeds (%.1f s):",
               set_mismatch, worst_rel, good, secs) +
               per_seed);
}

// ---------------------------------------------------------------------------

std::vector<double> oracle_ranks(const std::vector<double>& v) {
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        double less = 0.0, equal = 0.0;
        for (double w : v) {
            if (w < v[i]) less += 1.0;
            if (w == v[i]) equal += 1.0;
        }
        r[i] = less + (equal + 1.0) / 2.0;
    }
    return r;
}

double oracle_pearson(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i] / n;
        my += y[i] / n;
    }
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    return sxy / std::sqrt(sxx * syy);
}

void statistics_oracles() {
    const auto t0 = Clock::now();

    // Mann-Whitney: every split of 1..m+n into samples of sizes m and n.
    std::size_t splits = 0, mw_mismatch = 0;
    for (std::size_t m = 1; m <= 8; ++m)
        for (std::size_t n = 1; n <= 8; ++n) {
            const std::size_t total = m + n;
            std::vector<double> u_of_mask;
            std::vector<unsigned> masks;
            for (unsigned mask = 0; mask < (1u << total); ++mask) {
                if (static_cast<std::size_t>(std::popcount(mask)) != m) continue;
                double rank_sum = 0.0;
                for (std::size_t i = 0; i < total; ++i)
                    if (mask >> i & 1u) rank_sum += static_cast<double>(i + 1);
                masks.push_back(mask);
                u_of_mask.push_back(rank_sum - static_cast<double>(m * (m + 1)) / 2.0);
            }
            const double count = static_cast<double>(masks.size());
            for (std::size_t k = 0; k < masks.size(); ++k) {
                std::vector<double> x, y;
                for (std::size_t i = 0; i < total; ++i)
                    (masks[k] >> i & 1u ? x : y).push_back(static_cast<double>(i + 1));
                double le = 0.0, ge = 0.0;
                for (double u : u_of_mask) {
                    if (u <= u_of_mask[k]) le += 1.0;
                    if (u >= u_of_mask[k]) ge += 1.0;
                }
                const double p_less = le / count, p_greater = ge / count;
                const double p_two = std::min(1.0, 2.0 * std::min(p_less, p_greater));
                const auto less = stats::mann_whitney_u(x, y, stats::Alternative::Less);
                const auto greater = stats::mann_whitney_u(x, y, stats::Alternative::Greater);
                const auto two = stats::mann_whitney_u(x, y, stats::Alternative::TwoSided);
                if (!less.exact || less.p_value != p_less || greater.p_value != p_greater || two.p_value != p_two ||
                    less.statistic != u_of_mask[k])
                    ++mw_mismatch;
                ++splits;
            }
        }

    // Spearman against Pearson on independently computed ranks.
    std::mt19937_64 rng(505);
    std::normal_distribution<double> g;
    std::uniform_int_distribution<int> coarse(0, 9);
    double worst_rho = 0.0;
    for (int rep = 0; rep < 200; ++rep) {
        const std::size_t n = 5 + static_cast<std::size_t>(rep % 60);
        std::vector<double> x(n), y(n);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = rep % 2 ? g(rng) : static_cast<double>(coarse(rng));  // half the trials have ties
            y[i] = 0.5 * x[i] + g(rng);
        }
        const double rho = stats::spearman(x, y).statistic;
        worst_rho = std::max(worst_rho, std::abs(rho - oracle_pearson(oracle_ranks(x), oracle_ranks(y))));
    }

    // Chi-square p against a permutation simulation with fixed margins.
    double worst_chi = 0.0;
    for (int rep = 0; rep < 5; ++rep) {
        std::vector<double> row_p(4), col_p(8);
        std::uniform_real_distribution<double> u(0.5, 1.5);
        for (auto& v : row_p) v = u(rng);
        for (auto& v : col_p) v = u(rng);
        std::discrete_distribution<int> rows(row_p.begin(), row_p.end()), cols(col_p.begin(), col_p.end());
        std::vector<int> obs_r, obs_c;
        std::vector<double> table(32, 0.0);
        for (int k = 0; k < 500; ++k) {
            const int r = rows(rng);
            // Mild dependence so p-values spread over (0, 1).
            const int c = std::uniform_real_distribution<double>(0, 1)(rng) < 0.04 * rep ? r : cols(rng);
            obs_r.push_back(r);
            obs_c.push_back(c);
            table[static_cast<std::size_t>(r * 8 + c)] += 1.0;
        }
        const auto res = stats::chi_square(table, 4, 8);
        std::size_t hits = 0;
        const int draws = 100000;
        std::vector<double> sim(32);
        for (int d = 0; d < draws; ++d) {
            std::shuffle(obs_c.begin(), obs_c.end(), rng);
            std::fill(sim.begin(), sim.end(), 0.0);
            for (std::size_t k = 0; k < obs_r.size(); ++k) sim[static_cast<std::size_t>(obs_r[k] * 8 + obs_c[k])] += 1.0;
            if (stats::chi_square_statistic(sim, 4, 8) >= res.statistic - 1e-9) ++hits;
        }
        worst_chi = std::max(worst_chi, std::abs(res.p_value - static_cast<double>(hits) / draws));
    }

    // Dip test.
    std::vector<double> two_point(50, 0.0);
    std::fill(two_point.begin() + 25, two_point.end(), 1.0);
    const auto dip_two = stats::dip_test(two_point, 2000, 11);
    std::vector<double> uniform(100);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::mt19937_64 dip_rng(12);
    for (auto& v : uniform) v = unit(dip_rng);
    const auto dip_uni = stats::dip_test(uniform, 2000, 13);

    const double secs = seconds_since(t0);
    const bool ok = mw_mismatch == 0 && worst_rho <= 1e-12 && worst_chi <= 0.02 && dip_two.p_value < 0.01 &&
                    dip_uni.p_value > 0.1 && secs < 60.0;
    report(5, ok,
           fmt("Mann-Whitney exact vs enumeration: %zu/%zu splits mismatched; Spearman vs Pearson-on-ranks max diff "
               "%.2g; chi-square vs 100k permutations max |dp| %.4f; dip p two-point %.4f, uniform %.4f; %.1f s",
               mw_mismatch, splits, worst_rho, worst_chi, dip_two.p_value, dip_uni.p_value, secs));
}

// ---------------------------------------------------------------------------

std::vector<std::size_t> all_users(const PostTable& t) {
    std::vector<std::size_t> m(t.user_count());
    std::iota(m.begin(), m.end(), std::size_t{0});
    return m;
}

void ratio_algebra() {
    auto spec = synth::nocturnal_surge_spec(20, 300, 320, 30);
    const auto gen = synth::generate(spec, 606);
    const auto tz = TzRule::parse(spec.tz);
    const auto posts = localize(gen.posts, tz);
    const auto members = all_users(posts);

    double worst_sum = 0.0;
    std::array<double, kBins> total{};
    for (auto c : kAllCategories) {
        if (c == ContentCategory::Other) continue;
        const auto s = ratios::ratio_series(posts, members, CategorySet{c});
        for (std::size_t b = 0; b < kBins; ++b) total[b] += s.values[b];
    }
    const auto known = ratios::ratio_series(posts, members, CategorySet::known());
    for (std::size_t b = 0; b < kBins; ++b)
        if (!known.masked[b]) worst_sum = std::max(worst_sum, std::abs(total[b] - 1.0));

    const auto h = ratios::ratio_series(posts, members, CategorySet::disinformative());
    const auto p = ratios::ratio_series(posts, members, {ContentCategory::Political});
    const auto f = ratios::ratio_series(posts, members, {ContentCategory::FakeOrHoax});
    const auto c = ratios::ratio_series(posts, members, {ContentCategory::ConspiracyJunkScience});
    std::size_t composite_mismatch = 0;
    for (std::size_t b = 0; b < kBins; ++b)
        if (h.masked[b] != p.masked[b] || h.values[b] != p.values[b] + f.values[b] + c.values[b]) ++composite_mismatch;

    // Duplicate every post of a few users, shifted by one second so the
    // copies survive deduplication but stay in the same bin.
    std::vector<PostRecord> rows;
    for (std::size_t r = 0; r < gen.posts.size(); ++r) rows.push_back(gen.posts.record(r));
    std::size_t dup_users = 0, bit_mismatch = 0;
    for (std::size_t u : {std::size_t{0}, std::size_t{7}, std::size_t{33}, gen.posts.user_count() - 1}) {
        ++dup_users;
        const auto [first, last] = gen.posts.user_rows(u);
        for (std::size_t r = first; r < last; ++r) {
            auto rec = gen.posts.record(r);
            const auto local = posts.local_second(r);
            rec.timestamp += (local % 900 == 899) ? -1 : 1;
            rows.push_back(rec);
        }
    }
    const auto dup = localize(PostTable::build(std::move(rows), gen.posts.span()), tz);
    for (auto cats : {CategorySet::disinformative(), CategorySet{ContentCategory::Science},
                      CategorySet{ContentCategory::MainstreamMedia}, CategorySet::known()}) {
        const auto a = ratios::ratio_series(posts, members, cats);
        const auto b = ratios::ratio_series(dup, all_users(dup), cats);
        for (std::size_t k = 0; k < kBins; ++k)
            if (a.values[k] != b.values[k] || a.masked[k] != b.masked[k]) ++bit_mismatch;
    }
    report(6, worst_sum <= 1e-12 && composite_mismatch == 0 && bit_mismatch == 0,
           fmt("shares sum to 1 within %.2g; F^H differs from P+F+C at %zu bins; duplicating %zu users' posts: %zu bins "
               "differ",
               worst_sum, composite_mismatch, dup_users, bit_mismatch));
}

void nocturnal_recovery() {
    const auto t0 = Clock::now();
    RunConfig cfg;
    cfg.synth = "preset:nocturnal";
    cfg.plots = false;
    const auto bundle = run_pipeline(cfg);
    const std::size_t peak_bin = 13;  // 03:15-03:30, middle of 02:30-04:15
    int ok_groups = 0;
    std::string detail;
    for (const auto& g : bundle.groups) {
        const bool window = std::find(g.susceptibility.begin(), g.susceptibility.end(), peak_bin) != g.susceptibility.end();
        double p = 1.0;
        for (const auto& dn : g.day_night)
            if (dn.partition == "clock") p = dn.night_greater.p_value;
        const bool ok = window && p < 0.01;
        ok_groups += ok ? 1 : 0;
        detail += fmt(" %s:%s,p=%.2g", g.name.c_str(), window ? "peak-in-window" : "peak-missed", p);
    }
    report(7, bundle.groups.size() == 4 && ok_groups == 4,
           fmt("nocturnal surge recovered in %d/%zu groups (%.1f s):", ok_groups, bundle.groups.size(),
               seconds_since(t0)) +
               detail);
}

// ---------------------------------------------------------------------------

// Julian-day sunrise equation, independent of the library's fractional-year model.
std::pair<double, double> sunrise_equation_utc(double lat, double lon, CivilDate date) {
    constexpr double rad = M_PI / 180.0;
    const double n = static_cast<double>(days_from_civil(date) - days_from_civil({2000, 1, 1}));
    const double j_star = n - lon / 360.0;
    const double m = std::fmod(357.5291 + 0.98560028 * j_star, 360.0);
    const double c = 1.9148 * std::sin(m * rad) + 0.02 * std::sin(2 * m * rad) + 0.0003 * std::sin(3 * m * rad);
    const double lambda = std::fmod(m + c + 180.0 + 102.9372, 360.0);
    const double transit = 2451545.0 + j_star + 0.0053 * std::sin(m * rad) - 0.0069 * std::sin(2 * lambda * rad);
    const double sin_d = std::sin(lambda * rad) * std::sin(23.4397 * rad);
    const double cos_d = std::cos(std::asin(sin_d));
    const double cos_w = (std::sin(-0.833 * rad) - std::sin(lat * rad) * sin_d) / (std::cos(lat * rad) * cos_d);
    const double w = std::acos(cos_w) / rad;
    const double midnight = static_cast<double>(days_from_civil(date)) + 2440587.5;
    return {(transit - w / 360.0 - midnight) * 24.0, (transit + w / 360.0 - midnight) * 24.0};
}

std::string hhmm(double h) {
    const int m = static_cast<int>(std::lround(h * 60.0));
    return fmt("%02d:%02d", m / 60 % 24, m % 60);
}

void solar_checks() {
    const auto utc = TzRule::parse("UTC");
    const auto cet = TzRule::parse("CET");
    const auto eq = solar::sun_times(0.0, 0.0, {2021, 3, 20}, utc);
    const double eq_len = *eq.day_length();
    const bool eq_ok = std::abs(eq_len - 12.0) <= 10.0 / 60.0;

    double worst_min = 0.0;
    for (CivilDate d : {CivilDate{2021, 6, 21}, CivilDate{2021, 12, 21}}) {
        const auto ev = solar::utc_events(41.9, 12.5, d);
        const auto [rise, set] = sunrise_equation_utc(41.9, 12.5, d);
        worst_min = std::max(worst_min, std::abs(ev.sunrise_minutes / 60.0 - rise) * 60.0);
        worst_min = std::max(worst_min, std::abs(ev.sunset_minutes / 60.0 - set) * 60.0);
    }
    const bool rome_ok = worst_min <= 5.0;

    const auto b = solar::average_boundaries(41.9, 12.5, {2020, 1, 22}, {2022, 7, 31}, cet);
    auto on_grid = [](double h) { return std::fmod(h * 4.0, 1.0) == 0.0; };
    const bool style_ok = on_grid(b.sunrise) && on_grid(b.sunset) && std::abs(b.sunrise - 6.5) <= 0.25 &&
                          std::abs(b.sunset - 18.75) <= 0.25;
    report(8, eq_ok && rome_ok && style_ok,
           fmt("equator equinox day %.3f h; Rome solstice vs sunrise equation max %.2f min; Rome average boundaries "
               "%s-%s (target 06:30-18:45)",
               eq_len, worst_min, hhmm(b.sunrise).c_str(), hhmm(b.sunset).c_str()));
}

// ---------------------------------------------------------------------------

std::string read_all(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void determinism() {
    const auto t0 = Clock::now();
    RunConfig cfg;
    // About 10^5 posts: 3 x 80 users at 300-400 posts plus 200 infrequent users.
    cfg.synth = "preset:nocturnal:80:300:400:200";
    const auto input = load_input(cfg);
    const auto base = fs::temp_directory_path() / "diurnal_acceptance";
    fs::remove_all(base);
    std::vector<std::vector<std::pair<std::string, std::string>>> outputs;
    for (int threads : {1, 4, 8}) {
        cfg.threads = threads;
        const auto bundle = analyze(cfg, input);
        const auto dir = base / std::to_string(threads);
        std::vector<std::pair<std::string, std::string>> files;
        for (const auto& p : emit_report(bundle, dir, true)) files.emplace_back(p.filename().string(), read_all(p));
        outputs.push_back(std::move(files));
    }
    fs::remove_all(base);
    const bool same = outputs[0] == outputs[1] && outputs[0] == outputs[2];
    const double secs = seconds_since(t0);
    report(9, same && secs < 60.0 && input.posts.size() >= 90000,
           fmt("%zu posts, %zu output files byte-identical across 1/4/8 threads: %s; %.1f s", input.posts.size(),
               outputs[0].size(), same ? "yes" : "no", secs));
}

}  // namespace

int main(int argc, char** argv) {
    const std::string replica = argc > 1 ? argv[1] : "";
    const std::vector<std::function<void()>> checks = {
        spectral_round_trip, [&] { harmonic_budget(replica); }, wake_window_oracle, clustering_recovery,
        statistics_oracles,  ratio_algebra,                     nocturnal_recovery, solar_checks,
        determinism,
    };
    for (std::size_t i = 0; i < checks.size(); ++i) {
        try {
            checks[i]();
        } catch (const std::exception& e) {
            report(static_cast<int>(i + 1), false, std::string("threw: ") + e.what());
        }
    }
    std::printf("%d of %zu criteria failed\n", failures, checks.size());
    return failures == 0 ? 0 : 1;
}
