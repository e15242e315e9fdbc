#pragma once

#include <optional>
#include <string>
#include <vector>

#include "diurnal/activity.hpp"
#include "diurnal/clustering.hpp"
#include "diurnal/config.hpp"
#include "diurnal/ingest.hpp"
#include "diurnal/ratios.hpp"
#include "diurnal/rhythm.hpp"
#include "diurnal/solar.hpp"
#include "diurnal/spectral.hpp"
#include "diurnal/stats.hpp"

namespace diurnal {

/// Day-versus-night comparison of one group's per-bin ratios.
struct DayNightResult {
    std::string partition;  // clock, sun, waking
    double day_start = 0.0;
    double day_end = 0.0;
    std::size_t n_day = 0;
    std::size_t n_night = 0;
    stats::TestResult two_sided;     // night against day
    stats::TestResult night_greater;  // one-sided, night > day
    std::string lower;                // "day", "night" or "" when equal medians
};

/// Everything computed for one cluster (or the infrequent users).
struct GroupReport {
    std::string name;
    bool infrequent = false;
    std::vector<std::size_t> members;  // user indices into the post table
    std::size_t post_count = 0;

    DiurnalCurve raw;
    DiurnalCurve smoothed;
    DiurnalCurve spectral;
    DiurnalCurve aligned;  // spectral curve shifted so the wake onset is hour 0
    spectral::SpectralDecomposition spectrum;
    spectral::BudgetSelection budget;
    rhythm::WakeWindow wake;
    std::vector<rhythm::Extremum> extrema;

    ratios::RatioSeries ratio;
    DiurnalCurve ratio_smoothed;
    DiurnalCurve ratio_spectral;
    spectral::BudgetSelection ratio_budget;
    std::vector<std::size_t> susceptibility;
    ratios::Heatmap heatmap;
    std::optional<ratios::PeriodComparison> lockdown;

    std::optional<stats::TestResult> dip_coarse;
    std::optional<stats::TestResult> dip_smooth;
    std::vector<DayNightResult> day_night;
    std::optional<stats::TestResult> spearman_posts_ratio;
    std::optional<stats::TestResult> spearman_activity_raw;
    std::optional<stats::TestResult> spearman_activity_smooth;
};

/// One-sided test that the row group's Fourier-smoothed ratios are smaller
/// than the column group's.
struct PairwiseTest {
    std::string row;
    std::string col;
    stats::TestResult result;
};

struct ReportBundle {
    RunConfig config;
    std::string config_hash;
    IngestCounters counters;
    std::size_t post_count = 0;
    std::size_t user_count = 0;

    clustering::ClusterModel model;
    std::vector<std::string> cluster_names;  // by label
    std::vector<GroupReport> groups;         // clusters by label, then infrequent
    std::vector<PairwiseTest> pairwise;
    std::optional<stats::TestResult> chi_content_cluster;
    std::optional<stats::TestResult> chi_lockdown;

    Coordinate location;  // mean user coordinate used for sun times
    solar::Boundaries clock_boundaries;
    std::vector<solar::SunTimes> sun;

    /// Agreement with generator labels, synthetic input only.
    std::optional<double> ground_truth_ari;
    std::vector<std::string> warnings;
};

/// Loaded and localized posts plus ground-truth labels for synthetic runs.
struct LoadedInput {
    PostTable posts;
    IngestCounters counters;
    std::vector<std::string> truth_users;
    std::vector<std::size_t> truth_labels;
};

LoadedInput load_input(const RunConfig& config);

/// Runs every stage on already loaded input. Errors carry a `[stage]` prefix
/// and keep their type; DegenerateData inside a group's analysis becomes a
/// warning unless the config is strict.
ReportBundle analyze(const RunConfig& config, const LoadedInput& input);

/// load_input followed by analyze.
ReportBundle run_pipeline(const RunConfig& config);

}  // namespace diurnal
