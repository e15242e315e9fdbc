#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>

#include "diurnal/clustering.hpp"
#include "diurnal/kernels.hpp"
#include "fixtures.hpp"

using namespace diurnal;
using namespace diurnal::clustering;

namespace {

double sq_euclid(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t t = 0; t < a.size(); ++t) s += (a[t] - b[t]) * (a[t] - b[t]);
    return s;
}

struct NaiveStep {
    std::set<std::size_t> merged;
    double height;
};

// Recomputes every pairwise Ward cost from member centroids at each step.
std::vector<NaiveStep> naive_ward(const std::vector<DiurnalCurve>& pts) {
    std::vector<std::vector<std::size_t>> clusters;
    for (std::size_t i = 0; i < pts.size(); ++i) clusters.push_back({i});
    auto centroid = [&](const std::vector<std::size_t>& m) {
        std::vector<double> c(kBins, 0.0);
        for (auto i : m)
            for (std::size_t t = 0; t < kBins; ++t) c[t] += pts[i][t];
        for (auto& v : c) v /= static_cast<double>(m.size());
        return c;
    };
    std::vector<NaiveStep> out;
    while (clusters.size() > 1) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t ba = 0, bb = 0;
        std::pair<std::size_t, std::size_t> key{SIZE_MAX, SIZE_MAX};
        for (std::size_t a = 0; a < clusters.size(); ++a)
            for (std::size_t b = a + 1; b < clusters.size(); ++b) {
                const double na = static_cast<double>(clusters[a].size());
                const double nb = static_cast<double>(clusters[b].size());
                const double cost = 2.0 * na * nb / (na + nb) * sq_euclid(centroid(clusters[a]), centroid(clusters[b]));
                const std::size_t lo = std::min(clusters[a].front(), clusters[b].front());
                const std::size_t hi = std::max(clusters[a].front(), clusters[b].front());
                if (cost < best || (cost == best && std::pair{lo, hi} < key)) {
                    best = cost;
                    ba = a;
                    bb = b;
                    key = {lo, hi};
                }
            }
        NaiveStep s;
        for (auto i : clusters[ba]) s.merged.insert(i);
        for (auto i : clusters[bb]) s.merged.insert(i);
        s.height = std::sqrt(best);
        out.push_back(s);
        std::vector<std::size_t> joined(s.merged.begin(), s.merged.end());
        clusters.erase(clusters.begin() + static_cast<long>(bb));
        clusters[ba] = joined;
    }
    return out;
}

std::vector<std::set<std::size_t>> member_sets(const Dendrogram& d, std::size_t n) {
    std::vector<std::set<std::size_t>> sets(2 * n - 1);
    for (std::size_t i = 0; i < n; ++i) sets[i] = {i};
    for (std::size_t s = 0; s < d.size(); ++s) {
        sets[n + s] = sets[d[s].left];
        sets[n + s].insert(sets[d[s].right].begin(), sets[d[s].right].end());
    }
    return sets;
}

std::vector<DiurnalCurve> blob(std::mt19937_64& rng, std::size_t count, double peak_hour, double noise) {
    std::normal_distribution<double> jitter(0.0, noise);
    std::vector<DiurnalCurve> out;
    for (std::size_t i = 0; i < count; ++i) {
        DiurnalCurve c;
        for (std::size_t b = 0; b < kBins; ++b) {
            const double h = (static_cast<double>(b) + 0.5) / 4.0;
            double d = std::abs(h - peak_hour);
            d = std::min(d, 24.0 - d);
            c[b] = std::exp(-d * d / 8.0) + jitter(rng);
        }
        out.push_back(c);
    }
    return out;
}

}  // namespace

TEST_CASE("Ward dendrogram matches naive recomputation") {
    std::mt19937_64 rng(11);
    std::vector<DiurnalCurve> pts;
    for (int i = 0; i < 30; ++i) pts.push_back(fixtures::random_curve(rng));
    const auto fast = ward_dendrogram(pts, kernels::Exec::Serial);
    const auto slow = naive_ward(pts);
    REQUIRE(fast.size() == 29);
    const auto sets = member_sets(fast, 30);
    for (std::size_t s = 0; s < fast.size(); ++s) {
        CHECK(sets[30 + s] == slow[s].merged);
        CHECK(fast[s].height == doctest::Approx(slow[s].height).epsilon(1e-9));
        CHECK(fast[s].size == slow[s].merged.size());
        if (s > 0) CHECK(fast[s].height >= fast[s - 1].height - 1e-12);
    }
}

TEST_CASE("Ward serial and parallel dendrograms are identical") {
    std::mt19937_64 rng(12);
    std::vector<DiurnalCurve> pts;
    for (int i = 0; i < 80; ++i) pts.push_back(fixtures::random_curve(rng));
    const auto a = ward_dendrogram(pts, kernels::Exec::Serial);
    const auto b = ward_dendrogram(pts, kernels::Exec::Parallel);
    REQUIRE(a.size() == b.size());
    for (std::size_t s = 0; s < a.size(); ++s) {
        CHECK(a[s].left == b[s].left);
        CHECK(a[s].right == b[s].right);
        CHECK(a[s].height == b[s].height);
    }
}

TEST_CASE("coincident profiles merge first at height zero") {
    std::mt19937_64 rng(13);
    std::vector<DiurnalCurve> pts;
    for (int i = 0; i < 6; ++i) pts.push_back(fixtures::random_curve(rng));
    pts.push_back(pts[2]);
    const auto d = ward_dendrogram(pts);
    CHECK(d[0].left == 2);
    CHECK(d[0].right == 6);
    CHECK(d[0].height == 0.0);

    std::vector<DiurnalCurve> same(5, pts[0]);
    const auto z = ward_dendrogram(same);
    for (const auto& m : z) CHECK(m.height == 0.0);
    // Ties go to the lowest smallest-member pair.
    CHECK(z[0].left == 0);
    CHECK(z[0].right == 1);
}

TEST_CASE("Ward rejects fewer than two profiles") {
    std::vector<DiurnalCurve> one(1);
    CHECK_THROWS_AS(ward_dendrogram(one), std::invalid_argument);
}

TEST_CASE("infrequent split is strict at the threshold") {
    std::vector<fixtures::Post> rows;
    for (int i = 0; i < 239; ++i) rows.push_back({"a", static_cast<std::size_t>(i % 96), {}, i / 96, i});
    for (int i = 0; i < 240; ++i) rows.push_back({"b", static_cast<std::size_t>(i % 96), {}, i / 96, i});
    const auto t = fixtures::table_from(rows);
    const auto s = split_infrequent(t, 240);
    REQUIRE(s.infrequent.size() == 1);
    REQUIRE(s.frequent.size() == 1);
    CHECK(t.users()[s.infrequent[0]] == "a");
    CHECK(t.users()[s.frequent[0]] == "b");
    CHECK_THROWS_AS(split_infrequent(t, 0), std::invalid_argument);
}

TEST_CASE("cut_tree yields k labelled groups in first-member order") {
    std::mt19937_64 rng(14);
    std::vector<DiurnalCurve> pts;
    for (int i = 0; i < 25; ++i) pts.push_back(fixtures::random_curve(rng));
    const auto d = ward_dendrogram(pts);
    for (std::size_t k = 1; k <= 25; ++k) {
        const auto labels = cut_tree(d, 25, k);
        std::set<int> distinct(labels.begin(), labels.end());
        CHECK(distinct.size() == k);
        int seen = -1;
        for (int l : labels) {
            CHECK(l <= seen + 1);
            seen = std::max(seen, l);
        }
    }
    CHECK_THROWS_AS(cut_tree(d, 25, 0), std::invalid_argument);
    CHECK_THROWS_AS(cut_tree(d, 25, 26), std::invalid_argument);
}

TEST_CASE("adjusted Rand index hand values") {
    const std::vector<int> a{0, 0, 1, 1};
    const std::vector<int> b{0, 1, 0, 1};
    const std::vector<int> c{5, 5, 3, 3};
    CHECK(adjusted_rand_index(a, b) == doctest::Approx(-0.5));
    CHECK(adjusted_rand_index(a, c) == doctest::Approx(1.0));
    CHECK(adjusted_rand_index(a, a) == doctest::Approx(1.0));
    // {0,0,0,1,1,1} vs {0,0,1,1,2,2}: index 2, expected 6*3/15, max 4.5.
    const std::vector<int> x{0, 0, 0, 1, 1, 1};
    const std::vector<int> y{0, 0, 1, 1, 2, 2};
    const double expected = 6.0 * 3.0 / 15.0;
    CHECK(adjusted_rand_index(x, y) == doctest::Approx((2.0 - expected) / (4.5 - expected)));
    CHECK_THROWS_AS(adjusted_rand_index(a, x), std::invalid_argument);
}

TEST_CASE("majority vote prefers the smaller k on ties") {
    const std::vector<std::size_t> tied{2, 2, 3, 3, 4, 4};
    CHECK(majority_vote(tied) == 2);
    const std::vector<std::size_t> clear{3, 3, 3, 2, 4, 5};
    CHECK(majority_vote(clear) == 3);
    const std::vector<std::size_t> spread{7, 5, 9, 6, 8, 10};
    CHECK(majority_vote(spread) == 5);
}

TEST_CASE("validity indices match brute-force definitions") {
    std::mt19937_64 rng(15);
    auto pts = blob(rng, 8, 8.0, 0.05);
    auto more = blob(rng, 7, 20.0, 0.05);
    pts.insert(pts.end(), more.begin(), more.end());
    more = blob(rng, 5, 14.0, 0.05);
    pts.insert(pts.end(), more.begin(), more.end());
    const std::size_t n = pts.size();
    std::vector<int> labels(n);
    for (std::size_t i = 0; i < n; ++i) labels[i] = i < 8 ? 0 : (i < 15 ? 1 : 2);
    const auto sq = kernels::squared_distances(pts, kernels::Exec::Serial);
    const auto row = score_partition(pts, sq, labels);

    std::vector<std::vector<double>> p(n, std::vector<double>(kBins));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t t = 0; t < kBins; ++t) p[i][t] = pts[i][t];
    auto dist = [&](std::size_t i, std::size_t j) { return std::sqrt(sq_euclid(p[i], p[j])); };
    std::vector<std::vector<std::size_t>> members(3);
    for (std::size_t i = 0; i < n; ++i) members[static_cast<std::size_t>(labels[i])].push_back(i);
    std::vector<std::vector<double>> cent(3, std::vector<double>(kBins, 0.0));
    std::vector<double> grand(kBins, 0.0);
    for (std::size_t c = 0; c < 3; ++c) {
        for (auto i : members[c])
            for (std::size_t t = 0; t < kBins; ++t) cent[c][t] += p[i][t] / static_cast<double>(members[c].size());
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t t = 0; t < kBins; ++t) grand[t] += p[i][t] / static_cast<double>(n);

    double wss = 0.0, bss = 0.0;
    std::vector<double> scat(3, 0.0);
    for (std::size_t c = 0; c < 3; ++c) {
        for (auto i : members[c]) {
            wss += sq_euclid(p[i], cent[c]);
            scat[c] += std::sqrt(sq_euclid(p[i], cent[c])) / static_cast<double>(members[c].size());
        }
        bss += static_cast<double>(members[c].size()) * sq_euclid(cent[c], grand);
    }
    CHECK(row.wss == doctest::Approx(wss).epsilon(1e-10));
    CHECK(row.calinski_harabasz == doctest::Approx((bss / 2.0) / (wss / (static_cast<double>(n) - 3.0))).epsilon(1e-9));

    double db = 0.0;
    for (std::size_t a = 0; a < 3; ++a) {
        double worst = 0.0;
        for (std::size_t b = 0; b < 3; ++b)
            if (a != b) worst = std::max(worst, (scat[a] + scat[b]) / std::sqrt(sq_euclid(cent[a], cent[b])));
        db += worst / 3.0;
    }
    CHECK(row.davies_bouldin == doctest::Approx(db).epsilon(1e-9));

    double sil = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto own = static_cast<std::size_t>(labels[i]);
        double a = 0.0;
        for (auto j : members[own])
            if (j != i) a += dist(i, j);
        a /= static_cast<double>(members[own].size() - 1);
        double b = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < 3; ++c) {
            if (c == own) continue;
            double s = 0.0;
            for (auto j : members[c]) s += dist(i, j);
            b = std::min(b, s / static_cast<double>(members[c].size()));
        }
        sil += (b - a) / std::max(a, b) / static_cast<double>(n);
    }
    CHECK(row.silhouette == doctest::Approx(sil).epsilon(1e-9));

    double min_sep = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < 3; ++a)
        for (std::size_t b = a + 1; b < 3; ++b) {
            double s = 0.0;
            for (auto i : members[a])
                for (auto j : members[b]) s += dist(i, j);
            min_sep = std::min(min_sep, s / static_cast<double>(members[a].size() * members[b].size()));
        }
    const double max_diam = 2.0 * *std::max_element(scat.begin(), scat.end());
    CHECK(row.dunn == doctest::Approx(min_sep / max_diam).epsilon(1e-9));

    double cop = 0.0;
    for (std::size_t c = 0; c < 3; ++c) {
        double sep = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i) {
            if (static_cast<std::size_t>(labels[i]) == c) continue;
            double far = 0.0;
            for (auto j : members[c]) far = std::max(far, dist(i, j));
            sep = std::min(sep, far);
        }
        cop += static_cast<double>(members[c].size()) * scat[c] / sep / static_cast<double>(n);
    }
    CHECK(row.cop == doctest::Approx(cop).epsilon(1e-9));
}

TEST_CASE("well separated blobs give a unanimous k") {
    std::mt19937_64 rng(16);
    auto pts = blob(rng, 20, 7.0, 0.02);
    auto more = blob(rng, 20, 21.0, 0.02);
    pts.insert(pts.end(), more.begin(), more.end());
    const auto d = ward_dendrogram(pts);
    const auto choice = choose_k(d, pts, 10);
    CHECK(choice.k == 2);
    for (const auto& [idx, k] : choice.votes) CHECK_MESSAGE(k == 2, std::string(to_string(idx)));
    CHECK(choice.rows.size() == 9);
    const auto labels = cut_tree(d, pts.size(), 2);
    std::vector<int> truth(40, 0);
    std::fill(truth.begin() + 20, truth.end(), 1);
    CHECK(adjusted_rand_index(labels, truth) == doctest::Approx(1.0));
}

TEST_CASE("identical profiles are degenerate with k = 1") {
    std::vector<DiurnalCurve> same(10, fixtures::cosine_curve(0.3, 1, 0.0, 1.0));
    const auto d = ward_dendrogram(same);
    const auto choice = choose_k(d, same, 10);
    CHECK(choice.k == 1);
    CHECK(choice.degenerate);
}

TEST_CASE("clustering is invariant to the order of the profiles") {
    std::mt19937_64 rng(17);
    auto pts = blob(rng, 15, 9.0, 0.08);
    auto more = blob(rng, 15, 13.0, 0.08);
    pts.insert(pts.end(), more.begin(), more.end());
    more = blob(rng, 15, 22.0, 0.08);
    pts.insert(pts.end(), more.begin(), more.end());
    const auto d = ward_dendrogram(pts);
    const auto base = cut_tree(d, pts.size(), 3);

    std::vector<std::size_t> perm(pts.size());
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<DiurnalCurve> shuffled;
    for (auto i : perm) shuffled.push_back(pts[i]);
    const auto labels = cut_tree(ward_dendrogram(shuffled), shuffled.size(), 3);
    std::vector<int> mapped(pts.size());
    for (std::size_t i = 0; i < perm.size(); ++i) mapped[perm[i]] = labels[i];
    CHECK(adjusted_rand_index(base, mapped) == doctest::Approx(1.0));
}

TEST_CASE("chronotype names follow the peak hour") {
    CHECK(chronotype_name(fixtures::cosine_curve(1.0, 1, 2.0 * M_PI * 9.0 / 24.0)) == "morning");
    CHECK(chronotype_name(fixtures::cosine_curve(1.0, 1, 2.0 * M_PI * 14.0 / 24.0)) == "intermediate");
    CHECK(chronotype_name(fixtures::cosine_curve(1.0, 1, 2.0 * M_PI * 22.0 / 24.0)) == "evening");
    CHECK(chronotype_name(fixtures::cosine_curve(1.0, 1, 2.0 * M_PI * 2.0 / 24.0)) == "evening");
}

TEST_CASE("planted chronotypes are recovered from posts") {
    std::mt19937_64 rng(18);
    const double peaks[3] = {8.0, 13.5, 21.5};
    std::vector<fixtures::Post> rows;
    std::vector<int> truth;
    for (int g = 0; g < 3; ++g) {
        for (int u = 0; u < 25; ++u) {
            const std::string name = "u" + std::to_string(g) + "_" + std::to_string(u);
            std::normal_distribution<double> hour(peaks[g], 1.5);
            for (int k = 0; k < 300; ++k) {
                double h = std::fmod(hour(rng) + 48.0, 24.0);
                rows.push_back({name, static_cast<std::size_t>(h * 4.0) % kBins, {}, k % 300, k % 900});
            }
        }
    }
    const auto table = fixtures::table_from(rows);
    const auto model = cluster_users(table, 240, 10);
    REQUIRE(model.users.size() == 75);
    CHECK(model.choice.k == 3);
    for (const auto& u : model.users) truth.push_back(u[1] - '0');
    CHECK(adjusted_rand_index(model.labels, truth) >= 0.9);
}
