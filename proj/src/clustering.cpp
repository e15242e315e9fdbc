#include "diurnal/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "diurnal/common.hpp"

namespace diurnal::clustering {

using kernels::Exec;

FrequencySplit split_infrequent(const PostTable& posts, std::size_t threshold) {
    if (threshold < 1) throw std::invalid_argument("frequency threshold must be at least 1");
    FrequencySplit s;
    for (std::size_t u = 0; u < posts.user_count(); ++u)
        (posts.user_post_count(u) < threshold ? s.infrequent : s.frequent).push_back(u);
    return s;
}

Dendrogram ward_from_distances(std::vector<double> d, std::size_t n) {
    if (n < 2) throw std::invalid_argument("Ward clustering needs at least two profiles");
    if (d.size() != n * n) throw std::invalid_argument("distance matrix has the wrong size");
    constexpr double inf = std::numeric_limits<double>::infinity();
    auto at = [&](std::size_t i, std::size_t j) -> double& { return d[i * n + j]; };

    std::vector<char> active(n, 1);
    std::vector<std::size_t> size(n, 1), id(n), nn(n, 0);
    std::vector<double> nnd(n, inf);
    std::iota(id.begin(), id.end(), std::size_t{0});

    // Nearest active neighbour of slot i, lowest index on ties.
    auto refresh = [&](std::size_t i) {
        nnd[i] = inf;
        nn[i] = i;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i || !active[j]) continue;
            if (at(i, j) < nnd[i]) {
                nnd[i] = at(i, j);
                nn[i] = j;
            }
        }
    };
    for (std::size_t i = 0; i < n; ++i) refresh(i);

    Dendrogram out;
    out.reserve(n - 1);
    for (std::size_t step = 0; step + 1 < n; ++step) {
        // Slot indices equal each cluster's smallest member, so ordering by
        // (height, low slot, high slot) is the documented tie rule.
        std::size_t a = n, b = n;
        double best = inf;
        for (std::size_t i = 0; i < n; ++i) {
            if (!active[i]) continue;
            const std::size_t lo = std::min(i, nn[i]), hi = std::max(i, nn[i]);
            if (nnd[i] < best || (nnd[i] == best && (lo < a || (lo == a && hi < b)))) {
                best = nnd[i];
                a = lo;
                b = hi;
            }
        }
        const double na = static_cast<double>(size[a]);
        const double nb = static_cast<double>(size[b]);
        const double dab = at(a, b);
        for (std::size_t k = 0; k < n; ++k) {
            if (!active[k] || k == a || k == b) continue;
            const double nk = static_cast<double>(size[k]);
            const double v = ((na + nk) * at(k, a) + (nb + nk) * at(k, b) - nk * dab) / (na + nb + nk);
            at(k, a) = v;
            at(a, k) = v;
        }
        Merge m;
        m.left = std::min(id[a], id[b]);
        m.right = std::max(id[a], id[b]);
        m.height = std::sqrt(std::max(dab, 0.0));
        m.size = size[a] + size[b];
        out.push_back(m);

        active[b] = 0;
        size[a] += size[b];
        id[a] = n + step;
        for (std::size_t k = 0; k < n; ++k) {
            if (!active[k] || k == a) continue;
            if (nn[k] == a || nn[k] == b) {
                refresh(k);
            } else if (at(k, a) < nnd[k] || (at(k, a) == nnd[k] && a < nn[k])) {
                nnd[k] = at(k, a);
                nn[k] = a;
            }
        }
        refresh(a);
    }
    return out;
}

Dendrogram ward_dendrogram(std::span<const DiurnalCurve> profiles, Exec exec) {
    if (profiles.size() < 2) throw std::invalid_argument("Ward clustering needs at least two profiles");
    return ward_from_distances(kernels::squared_distances(profiles, exec), profiles.size());
}

std::vector<int> cut_tree(const Dendrogram& dendrogram, std::size_t n, std::size_t k) {
    if (n == 0) return {};
    if (k < 1 || k > n) throw std::invalid_argument("cannot cut into " + std::to_string(k) + " clusters");
    if (dendrogram.size() + 1 != n) throw std::invalid_argument("dendrogram does not match point count");
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    std::vector<std::size_t> rep(2 * n - 1);
    std::iota(rep.begin(), rep.begin() + static_cast<long>(n), std::size_t{0});
    for (std::size_t s = 0; s < n - k; ++s) {
        const auto& m = dendrogram[s];
        const std::size_t ra = find(rep[m.left]), rb = find(rep[m.right]);
        parent[std::max(ra, rb)] = std::min(ra, rb);
        rep[n + s] = std::min(ra, rb);
    }
    std::vector<int> labels(n, -1);
    std::vector<int> root_label(n, -1);
    int next = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t r = find(i);
        if (root_label[r] < 0) root_label[r] = next++;
        labels[i] = root_label[r];
    }
    return labels;
}

std::string_view to_string(ValidityIndex i) {
    switch (i) {
        case ValidityIndex::Elbow: return "elbow";
        case ValidityIndex::COI: return "coi";
        case ValidityIndex::CalinskiHarabasz: return "calinski_harabasz";
        case ValidityIndex::DaviesBouldin: return "davies_bouldin";
        case ValidityIndex::Dunn: return "dunn";
        case ValidityIndex::Silhouette: return "silhouette";
    }
    return "elbow";
}

IndexRow score_partition(std::span<const DiurnalCurve> profiles, const std::vector<double>& sq_dist,
                         std::span<const int> labels) {
    const std::size_t n = profiles.size();
    const int kk = labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
    const auto k = static_cast<std::size_t>(kk);
    IndexRow row;
    row.k = k;

    std::vector<std::size_t> count(k, 0);
    std::vector<std::array<double, kBins>> centroid(k);
    for (auto& c : centroid) c.fill(0.0);
    std::array<double, kBins> grand{};
    for (std::size_t i = 0; i < n; ++i) {
        const auto c = static_cast<std::size_t>(labels[i]);
        ++count[c];
        for (std::size_t t = 0; t < kBins; ++t) {
            centroid[c][t] += profiles[i][t];
            grand[t] += profiles[i][t];
        }
    }
    for (std::size_t c = 0; c < k; ++c)
        for (auto& v : centroid[c]) v /= static_cast<double>(count[c]);
    for (auto& v : grand) v /= static_cast<double>(n);

    auto dist_to_centroid = [&](std::size_t i) {
        double s = 0.0;
        const auto& cc = centroid[static_cast<std::size_t>(labels[i])];
        for (std::size_t t = 0; t < kBins; ++t) s += (profiles[i][t] - cc[t]) * (profiles[i][t] - cc[t]);
        return s;
    };
    double wss = 0.0, tss = 0.0;
    std::vector<double> scatter(k, 0.0);  // mean Euclidean distance to centroid
    for (std::size_t i = 0; i < n; ++i) {
        const double sq = dist_to_centroid(i);
        wss += sq;
        scatter[static_cast<std::size_t>(labels[i])] += std::sqrt(sq);
        for (std::size_t t = 0; t < kBins; ++t) tss += (profiles[i][t] - grand[t]) * (profiles[i][t] - grand[t]);
    }
    for (std::size_t c = 0; c < k; ++c) scatter[c] /= static_cast<double>(count[c]);
    row.wss = wss;

    if (k < 2) {
        row.calinski_harabasz = 0.0;
        row.davies_bouldin = 0.0;
        row.dunn = 0.0;
        row.silhouette = 0.0;
        row.cop = 0.0;
        return row;
    }

    // Calinski-Harabasz.
    const double nd = static_cast<double>(n), kd = static_cast<double>(k);
    row.calinski_harabasz = wss > 0.0 ? ((tss - wss) / (kd - 1.0)) / (wss / (nd - kd))
                                       : std::numeric_limits<double>::infinity();

    // Davies-Bouldin.
    double db = 0.0;
    for (std::size_t a = 0; a < k; ++a) {
        double worst = 0.0;
        for (std::size_t b = 0; b < k; ++b) {
            if (a == b) continue;
            double m = 0.0;
            for (std::size_t t = 0; t < kBins; ++t) m += (centroid[a][t] - centroid[b][t]) * (centroid[a][t] - centroid[b][t]);
            m = std::sqrt(m);
            const double r = m > 0.0 ? (scatter[a] + scatter[b]) / m : std::numeric_limits<double>::infinity();
            worst = std::max(worst, r);
        }
        db += worst;
    }
    row.davies_bouldin = db / kd;

    // Per-point sums and maxima of distances to every cluster.
    std::vector<double> sum_to(n * k, 0.0), max_to(n * k, 0.0);
    const auto ni = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic, 32)
    for (std::int64_t ii = 0; ii < ni; ++ii) {
        const auto i = static_cast<std::size_t>(ii);
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            const double dij = std::sqrt(sq_dist[i * n + j]);
            const auto c = static_cast<std::size_t>(labels[j]);
            sum_to[i * k + c] += dij;
            max_to[i * k + c] = std::max(max_to[i * k + c], dij);
        }
    }

    // Silhouette.
    double sil = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto own = static_cast<std::size_t>(labels[i]);
        if (count[own] < 2) continue;
        const double a = sum_to[i * k + own] / static_cast<double>(count[own] - 1);
        double b = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < k; ++c)
            if (c != own) b = std::min(b, sum_to[i * k + c] / static_cast<double>(count[c]));
        const double denom = std::max(a, b);
        sil += denom > 0.0 ? (b - a) / denom : 0.0;
    }
    row.silhouette = sil / nd;

    // Generalised Dunn: smallest average-linkage separation over largest
    // centroid-based diameter.
    std::vector<double> between(k * k, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const auto own = static_cast<std::size_t>(labels[i]);
        for (std::size_t c = 0; c < k; ++c) between[own * k + c] += sum_to[i * k + c];
    }
    double min_sep = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = a + 1; b < k; ++b)
            min_sep = std::min(min_sep, between[a * k + b] / (static_cast<double>(count[a]) * static_cast<double>(count[b])));
    double max_diam = 0.0;
    for (std::size_t c = 0; c < k; ++c) max_diam = std::max(max_diam, 2.0 * scatter[c]);
    row.dunn = max_diam > 0.0 ? min_sep / max_diam : std::numeric_limits<double>::infinity();

    // COP: size-weighted ratio of centroid scatter to the distance from the
    // cluster to its nearest outsider (furthest-member distance).
    double cop = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
        double sep = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i)
            if (static_cast<std::size_t>(labels[i]) != c) sep = std::min(sep, max_to[i * k + c]);
        if (sep > 0.0) cop += static_cast<double>(count[c]) * scatter[c] / sep;
    }
    row.cop = cop / nd;
    return row;
}

namespace {

std::size_t knee(const std::vector<double>& curve_by_k, std::size_t k_lo, std::size_t k_hi) {
    // curve_by_k[k] defined for k in [k_lo - 1, k_hi + 1].
    std::size_t best_k = k_lo;
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t k = k_lo; k <= k_hi; ++k) {
        const double second = curve_by_k[k - 1] - 2.0 * curve_by_k[k] + curve_by_k[k + 1];
        if (second > best) {
            best = second;
            best_k = k;
        }
    }
    return best_k;
}

template <typename Get, typename Better>
std::size_t best_k(const std::vector<IndexRow>& rows, Get get, Better better) {
    std::size_t k = rows.front().k;
    double v = get(rows.front());
    for (const auto& r : rows) {
        if (better(get(r), v)) {
            v = get(r);
            k = r.k;
        }
    }
    return k;
}

}  // namespace

KChoice choose_k(const Dendrogram& dendrogram, std::span<const DiurnalCurve> profiles, std::size_t k_max,
                 Exec exec) {
    const std::size_t n = profiles.size();
    KChoice choice;
    if (n < 3) {
        choice.k = 1;
        choice.degenerate = true;
        return choice;
    }
    k_max = std::min(k_max, n - 1);
    if (k_max < 2) throw std::invalid_argument("k range must include 2");
    const auto sq = kernels::squared_distances(profiles, exec);
    if (std::all_of(sq.begin(), sq.end(), [](double v) { return v == 0.0; })) {
        choice.k = 1;
        choice.degenerate = true;
        return choice;
    }

    std::vector<double> wss(k_max + 2, 0.0);
    for (std::size_t k = 1; k <= k_max + 1; ++k) {
        const auto labels = cut_tree(dendrogram, n, k);
        IndexRow row = score_partition(profiles, sq, labels);
        wss[k] = row.wss;
        if (k >= 2 && k <= k_max) choice.rows.push_back(row);
    }

    auto& votes = choice.votes;
    votes[ValidityIndex::Elbow] = knee(wss, 2, k_max);
    votes[ValidityIndex::COI] = best_k(choice.rows, [](const IndexRow& r) { return r.cop; }, std::less<>{});
    votes[ValidityIndex::CalinskiHarabasz] =
        best_k(choice.rows, [](const IndexRow& r) { return r.calinski_harabasz; }, std::greater<>{});
    votes[ValidityIndex::DaviesBouldin] =
        best_k(choice.rows, [](const IndexRow& r) { return r.davies_bouldin; }, std::less<>{});
    votes[ValidityIndex::Dunn] = best_k(choice.rows, [](const IndexRow& r) { return r.dunn; }, std::greater<>{});
    votes[ValidityIndex::Silhouette] =
        best_k(choice.rows, [](const IndexRow& r) { return r.silhouette; }, std::greater<>{});

    std::vector<std::size_t> ks;
    for (const auto& [idx, k] : votes) ks.push_back(k);
    choice.k = majority_vote(ks);
    return choice;
}

std::size_t majority_vote(std::span<const std::size_t> votes) {
    if (votes.empty()) throw std::invalid_argument("no votes");
    std::map<std::size_t, int> tally;
    for (auto k : votes) ++tally[k];
    int top = 0;
    for (const auto& [k, c] : tally) top = std::max(top, c);
    for (const auto& [k, c] : tally)
        if (c == top) return k;
    return votes.front();
}

double adjusted_rand_index(std::span<const int> a, std::span<const int> b) {
    if (a.size() != b.size()) throw std::invalid_argument("label vectors differ in length");
    const std::size_t n = a.size();
    if (n < 2) return 1.0;
    std::map<std::pair<int, int>, double> joint;
    std::map<int, double> ra, rb;
    for (std::size_t i = 0; i < n; ++i) {
        joint[{a[i], b[i]}] += 1.0;
        ra[a[i]] += 1.0;
        rb[b[i]] += 1.0;
    }
    auto c2 = [](double x) { return x * (x - 1.0) / 2.0; };
    double sum_joint = 0.0, sum_a = 0.0, sum_b = 0.0;
    for (const auto& [key, v] : joint) sum_joint += c2(v);
    for (const auto& [key, v] : ra) sum_a += c2(v);
    for (const auto& [key, v] : rb) sum_b += c2(v);
    const double total = c2(static_cast<double>(n));
    const double expected = sum_a * sum_b / total;
    const double max_index = 0.5 * (sum_a + sum_b);
    if (max_index == expected) return 1.0;
    return (sum_joint - expected) / (max_index - expected);
}

std::string chronotype_name(const DiurnalCurve& curve) {
    const auto& v = curve.values();
    const auto b = static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
    const double h = bin_start_hour(b);
    if (h >= 5.0 && h < 12.0) return "morning";
    if (h >= 12.0 && h < 17.0) return "intermediate";
    return "evening";
}

ClusterModel cluster_users(const PostTable& posts, std::size_t threshold, std::size_t k_max,
                           double window_minutes, Exec exec) {
    ClusterModel model;
    const auto split = split_infrequent(posts, threshold);
    for (auto u : split.infrequent) model.infrequent.push_back(posts.users()[u]);
    for (auto u : split.frequent) model.users.push_back(posts.users()[u]);
    if (split.frequent.empty()) {
        model.choice.k = 0;
        model.choice.degenerate = true;
        return model;
    }
    if (split.frequent.size() < 3) {
        model.labels.assign(split.frequent.size(), 0);
        model.choice.k = 1;
        model.choice.degenerate = true;
        return model;
    }
    const auto kernel = gaussian_kernel(window_minutes);
    const auto profiles = kernels::smoothed_user_curves(posts, split.frequent, kernel, exec);
    model.dendrogram = ward_dendrogram(profiles, exec);
    model.choice = choose_k(model.dendrogram, profiles, k_max, exec);
    model.labels = cut_tree(model.dendrogram, profiles.size(), model.choice.k);
    return model;
}

void write_assignments_csv(std::ostream& out, const ClusterModel& model,
                           const std::vector<std::string>& label_names) {
    out << "user,cluster\n";
    for (std::size_t i = 0; i < model.users.size(); ++i) {
        const auto l = static_cast<std::size_t>(model.labels[i]);
        out << model.users[i] << ',' << (l < label_names.size() ? label_names[l] : std::to_string(l)) << '\n';
    }
    for (const auto& u : model.infrequent) out << u << ",infrequent\n";
}

void write_index_scores_csv(std::ostream& out, const KChoice& choice) {
    out << "k,wss,cop,calinski_harabasz,davies_bouldin,dunn,silhouette\n";
    for (const auto& r : choice.rows)
        out << r.k << ',' << format_number(r.wss) << ',' << format_number(r.cop) << ','
            << format_number(r.calinski_harabasz) << ',' << format_number(r.davies_bouldin) << ','
            << format_number(r.dunn) << ',' << format_number(r.silhouette) << '\n';
}

}  // namespace diurnal::clustering
