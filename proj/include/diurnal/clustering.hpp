#pragma once

#include <map>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "diurnal/activity.hpp"
#include "diurnal/ingest.hpp"
#include "diurnal/kernels.hpp"

namespace diurnal::clustering {

struct FrequencySplit {
    std::vector<std::size_t> frequent;    // user indices into the post table
    std::vector<std::size_t> infrequent;
};

/// Users with fewer than `threshold` posts are infrequent.
FrequencySplit split_infrequent(const PostTable& posts, std::size_t threshold = 240);

/// One agglomeration step. Cluster ids follow the usual linkage-matrix
/// convention: 0..n-1 are singletons, n+i is the cluster formed at step i.
struct Merge {
    std::size_t left = 0;
    std::size_t right = 0;
    double height = 0.0;
    std::size_t size = 0;
};

using Dendrogram = std::vector<Merge>;

/// Ward's minimum-variance agglomeration via the Lance-Williams update on
/// squared Euclidean distances. Heights are sqrt of the Ward criterion
/// 2 n_a n_b / (n_a + n_b) * |c_a - c_b|^2, so they are non-decreasing.
/// Ties resolve to the pair with the lowest smallest-member index.
Dendrogram ward_dendrogram(std::span<const DiurnalCurve> profiles, kernels::Exec exec = kernels::Exec::Parallel);
/// Same, from a precomputed row-major matrix of squared distances.
Dendrogram ward_from_distances(std::vector<double> sq_dist, std::size_t n);

/// Flat labels after applying the first n - k merges. Labels are numbered in
/// order of each group's smallest member index.
std::vector<int> cut_tree(const Dendrogram& dendrogram, std::size_t n, std::size_t k);

enum class ValidityIndex : std::uint8_t { Elbow, COI, CalinskiHarabasz, DaviesBouldin, Dunn, Silhouette };

inline constexpr std::array<ValidityIndex, 6> kAllIndices = {
    ValidityIndex::Elbow,         ValidityIndex::COI,  ValidityIndex::CalinskiHarabasz,
    ValidityIndex::DaviesBouldin, ValidityIndex::Dunn, ValidityIndex::Silhouette,
};

std::string_view to_string(ValidityIndex i);

struct IndexRow {
    std::size_t k = 0;
    double wss = 0.0;         // within-cluster sum of squares
    double cop = 0.0;         // context-independent optimality (COP) value
    double calinski_harabasz = 0.0;
    double davies_bouldin = 0.0;
    double dunn = 0.0;        // generalised Dunn, average-linkage / centroid diameter
    double silhouette = 0.0;
};

struct KChoice {
    std::size_t k = 1;
    std::vector<IndexRow> rows;
    std::map<ValidityIndex, std::size_t> votes;
    bool degenerate = false;
};

/// Scores every k in [2, k_max] and takes the mode of the six index votes,
/// ties going to the smaller k. Elbow votes for the knee of the WSS curve
/// (largest second difference); COI votes for the smallest COP value.
KChoice choose_k(const Dendrogram& dendrogram, std::span<const DiurnalCurve> profiles, std::size_t k_max = 10,
                 kernels::Exec exec = kernels::Exec::Parallel);

/// Most frequent value; ties go to the smallest.
std::size_t majority_vote(std::span<const std::size_t> votes);

/// Validity indices of one flat partition (k = number of distinct labels).
IndexRow score_partition(std::span<const DiurnalCurve> profiles, const std::vector<double>& sq_dist,
                         std::span<const int> labels);

double adjusted_rand_index(std::span<const int> a, std::span<const int> b);

/// morning / intermediate / evening by the hour of the curve maximum.
std::string chronotype_name(const DiurnalCurve& cluster_curve);

struct ClusterModel {
    std::vector<std::string> users;   // frequent users, in table order
    std::vector<int> labels;          // parallel to `users`
    std::vector<std::string> infrequent;
    Dendrogram dendrogram;
    KChoice choice;
};

/// Full clustering stage: split, smooth, Ward, choose k, cut.
ClusterModel cluster_users(const PostTable& posts, std::size_t threshold = 240, std::size_t k_max = 10,
                           double window_minutes = 90.0, kernels::Exec exec = kernels::Exec::Parallel);

void write_assignments_csv(std::ostream& out, const ClusterModel& model,
                           const std::vector<std::string>& label_names);
void write_index_scores_csv(std::ostream& out, const KChoice& choice);

}  // namespace diurnal::clustering
