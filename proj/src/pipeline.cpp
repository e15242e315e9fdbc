#include "diurnal/pipeline.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <stdexcept>

#include "diurnal/common.hpp"
#include "diurnal/kernels.hpp"
#include "diurnal/rng.hpp"
#include "diurnal/synth.hpp"

namespace diurnal {

namespace {

using kernels::Exec;

template <typename F>
auto stage(const char* name, F&& f) -> decltype(f()) {
    const std::string tag = std::string("[") + name + "] ";
    try {
        return f();
    } catch (const InputError& e) {
        throw InputError(tag + e.what());
    } catch (const DegenerateData& e) {
        throw DegenerateData(tag + e.what());
    } catch (const InvariantViolation& e) {
        throw InvariantViolation(tag + e.what());
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(tag + e.what());
    } catch (const std::exception& e) {
        throw std::runtime_error(tag + e.what());
    }
}

// Data-dependent failures inside one analysis become warnings in lenient mode.
template <typename F>
void soft(ReportBundle& b, const std::string& what, F&& f) {
    try {
        f();
    } catch (const DegenerateData& e) {
        if (b.config.strict) throw DegenerateData(what + ": " + e.what());
        b.warnings.push_back(what + ": " + e.what());
    } catch (const std::invalid_argument& e) {
        if (b.config.strict) throw DegenerateData(what + ": " + e.what());
        b.warnings.push_back(what + ": " + e.what());
    }
}

std::vector<std::string> split(const std::string& s, char d) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto p = s.find(d, start);
        out.push_back(s.substr(start, p - start));
        if (p == std::string::npos) break;
        start = p + 1;
    }
    return out;
}

synth::SynthSpec synth_spec_for(const RunConfig& c) {
    if (c.synth.rfind("preset:", 0) == 0) {
        const auto parts = split(c.synth, ':');
        auto num = [&](std::size_t i, std::size_t fallback) -> std::size_t {
            if (parts.size() <= i || parts[i].empty()) return fallback;
            try {
                return static_cast<std::size_t>(std::stoull(parts[i]));
            } catch (const std::exception&) {
                throw InputError("bad preset parameter '" + parts[i] + "'");
            }
        };
        synth::SynthSpec spec;
        if (parts[1] == "chronotypes") spec = synth::chronotype_spec(num(2, 300), num(3, 300), num(4, 400));
        else if (parts[1] == "nocturnal")
            spec = synth::nocturnal_surge_spec(num(2, 80), num(3, 300), num(4, 400), num(5, 150));
        else throw InputError("unknown synthetic preset '" + parts[1] + "'");
        spec.first_day = c.span_first;
        spec.end_day = c.span_end;
        spec.lockdown = c.lockdown;
        spec.tz = c.tz;
        return spec;
    }
    std::ifstream in(c.synth);
    if (!in) throw InputError("cannot open synthetic spec '" + c.synth + "'");
    return synth::parse_spec(in);
}

std::string unique_name(std::vector<std::string>& taken, const std::string& base) {
    std::string name = base;
    for (int i = 2; std::find(taken.begin(), taken.end(), name) != taken.end(); ++i)
        name = base + "_" + std::to_string(i);
    taken.push_back(name);
    return name;
}

std::string lower_side(std::vector<double> day, std::vector<double> night) {
    auto median = [](std::vector<double>& v) {
        std::sort(v.begin(), v.end());
        const std::size_t n = v.size();
        return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
    };
    const double d = median(day), n = median(night);
    if (d < n) return "day";
    if (n < d) return "night";
    return "";
}

DayNightResult compare(std::string partition, double start, double end, std::vector<double> day,
                       std::vector<double> night) {
    if (day.empty() || night.empty()) throw std::invalid_argument(partition + " partition left an empty side");
    DayNightResult r;
    r.partition = std::move(partition);
    r.day_start = start;
    r.day_end = end;
    r.n_day = day.size();
    r.n_night = night.size();
    r.two_sided = stats::mann_whitney_u(night, day, stats::Alternative::TwoSided);
    r.night_greater = stats::mann_whitney_u(night, day, stats::Alternative::Greater);
    r.lower = lower_side(std::move(day), std::move(night));
    return r;
}

void analyze_group(ReportBundle& b, GroupReport& g, const PostTable& posts, std::size_t index, Exec exec) {
    const auto& c = b.config;
    const auto metrics = curvedist::kAllMetrics;
    const std::string where = "group " + g.name;

    g.post_count = 0;
    for (auto u : g.members) g.post_count += posts.user_post_count(u);

    g.raw = cluster_activity_curve(posts, g.members);
    g.smoothed = gaussian_circular_smooth(g.raw, c.smoothing_minutes);
    g.spectrum = spectral::dft_forward(g.raw);
    g.budget = spectral::select_m(g.raw, metrics, c.m_min, c.m_max);
    g.spectral = spectral::reconstruct_with_budget(g.spectrum, g.budget.m);
    g.wake = rhythm::heightened_window(g.spectral, c.wake_hours);
    g.aligned = rhythm::align_by_reference(g.spectral, g.wake.onset);
    soft(b, where + " extrema", [&] { g.extrema = rhythm::extract_extrema(g.spectral, c.extrema); });

    g.ratio = ratios::ratio_series(posts, g.members, CategorySet::disinformative());
    g.ratio.cluster = g.name;
    const auto filled = g.ratio.filled();
    g.ratio_smoothed = gaussian_circular_smooth(filled, c.smoothing_minutes);
    g.ratio_budget = spectral::select_m(filled, metrics, c.m_min, c.m_max);
    g.ratio_spectral = spectral::reconstruct_with_budget(spectral::dft_forward(filled), g.ratio_budget.m);
    g.susceptibility = ratios::susceptibility_windows(g.ratio_spectral);
    g.heatmap = ratios::monthly_heatmap(posts, g.members, CategorySet::disinformative());
    soft(b, where + " lockdown", [&] { g.lockdown = ratios::period_comparison(posts, g.members, c.lockdown); });

    const std::uint64_t dip_seed = substream_seed(c.seed, 1000 + 2 * index);
    soft(b, where + " dip coarse", [&] {
        g.dip_coarse = stats::dip_test(stats::curve_quantile_sample(g.raw, c.dip_sample), c.dip_bootstrap, dip_seed,
                                       exec);
    });
    soft(b, where + " dip smooth", [&] {
        g.dip_smooth = stats::dip_test(stats::curve_quantile_sample(g.spectral, c.dip_sample), c.dip_bootstrap,
                                       dip_seed + 1, exec);
    });

    // Day/night partitions: clock boundaries, monthly sun times, waking window.
    soft(b, where + " day/night clock", [&] {
        const auto s = ratios::day_night_split(g.ratio, b.clock_boundaries.sunrise, b.clock_boundaries.sunset,
                                               c.margin_hours);
        g.day_night.push_back(
            compare("clock", b.clock_boundaries.sunrise, b.clock_boundaries.sunset, s.day, s.night));
    });
    soft(b, where + " day/night sun", [&] {
        const auto tz = TzRule::parse(c.tz);
        std::vector<double> day, night;
        for (std::size_t i = 0; i < g.heatmap.months.size(); ++i) {
            const auto bd = solar::monthly_boundaries(b.location.lat, b.location.lon, g.heatmap.months[i], tz);
            const auto& row = g.heatmap.rows[i];
            if (row.unmasked_count() == 0) continue;
            try {
                const auto s = ratios::day_night_split(row, bd.sunrise, bd.sunset, c.margin_hours);
                day.insert(day.end(), s.day.begin(), s.day.end());
                night.insert(night.end(), s.night.begin(), s.night.end());
            } catch (const std::invalid_argument&) {
                // a sparse month can leave one side empty; it contributes nothing
            }
        }
        g.day_night.push_back(compare("sun", std::nan(""), std::nan(""), std::move(day), std::move(night)));
    });
    soft(b, where + " day/night waking", [&] {
        const auto s = ratios::day_night_split(g.ratio, g.wake.onset, g.wake.end(), c.margin_hours);
        g.day_night.push_back(compare("waking", g.wake.onset, g.wake.end(), s.day, s.night));
    });

    soft(b, where + " spearman posts/ratio", [&] {
        std::vector<double> totals, shares;
        for (auto u : g.members) {
            const auto [lo, hi] = posts.user_rows(u);
            double known = 0.0, dis = 0.0;
            for (auto r = lo; r < hi; ++r) {
                const auto cat = posts.category(r);
                if (!cat || *cat == ContentCategory::Other) continue;
                known += 1.0;
                if (is_disinformative(*cat)) dis += 1.0;
            }
            if (known == 0.0) continue;
            totals.push_back(static_cast<double>(hi - lo));
            shares.push_back(dis / known);
        }
        g.spearman_posts_ratio = stats::spearman(totals, shares);
    });
    soft(b, where + " spearman activity/ratio raw", [&] {
        std::vector<double> a, r;
        for (std::size_t bin = 0; bin < kBins; ++bin) {
            if (g.ratio.masked[bin]) continue;
            a.push_back(g.raw[bin]);
            r.push_back(g.ratio.values[bin]);
        }
        g.spearman_activity_raw = stats::spearman(a, r);
    });
    soft(b, where + " spearman activity/ratio smooth", [&] {
        g.spearman_activity_smooth = stats::spearman(g.spectral.span(), g.ratio_spectral.span());
    });
}

}  // namespace

LoadedInput load_input(const RunConfig& c) {
    return stage("ingest", [&] {
        LoadedInput in;
        const auto tz = TzRule::parse(c.tz);
        if (!c.synth.empty()) {
            const auto spec = synth_spec_for(c);
            auto out = synth::generate(spec, c.seed);
            LocalizeReport lr;
            in.posts = localize(out.posts, tz, &lr);
            in.counters.rows_read = in.posts.size();
            in.counters.dst_gap = lr.dst_gap;
            in.counters.dst_overlap = lr.dst_overlap;
            in.truth_users = std::move(out.users);
            in.truth_labels = std::move(out.population);
            return in;
        }
        if (c.posts.empty()) throw InputError("no input: set 'posts' or 'synth'");
        std::ifstream f(c.posts);
        if (!f) throw InputError("cannot open posts file '" + c.posts + "'");
        ParseOptions opts;
        opts.span = AnalysisSpan::from_dates(c.span_first, c.span_end);
        auto parsed = parse_posts(f, opts);
        in.counters = parsed.counters;
        PostTable table = std::move(parsed.table);
        if (!c.category_map.empty() || !c.bot_list.empty()) {
            CategoryMap cmap;
            BotList bots;
            if (!c.category_map.empty()) {
                std::ifstream m(c.category_map);
                if (!m) throw InputError("cannot open category map '" + c.category_map + "'");
                cmap = read_category_map(m);
            }
            if (!c.bot_list.empty()) {
                std::ifstream m(c.bot_list);
                if (!m) throw InputError("cannot open bot list '" + c.bot_list + "'");
                bots = read_bot_list(m);
            }
            FilterReport fr;
            table = map_and_filter(table, cmap, bots, &fr);
            in.counters.bot_removed = fr.bot_removed;
            in.counters.category_mapped = fr.mapped;
            in.counters.category_other = fr.other;
        }
        LocalizeReport lr;
        in.posts = localize(table, tz, &lr);
        in.counters.dst_gap = lr.dst_gap;
        in.counters.dst_overlap = lr.dst_overlap;
        return in;
    });
}

ReportBundle analyze(const RunConfig& c, const LoadedInput& input) {
    kernels::set_threads(c.threads);
    const Exec exec = Exec::Parallel;
    const PostTable& posts = input.posts;

    ReportBundle b;
    b.config = c;
    b.config_hash = c.hash();
    b.counters = input.counters;
    b.post_count = posts.size();
    b.user_count = posts.user_count();
    if (posts.empty()) throw DegenerateData("[ingest] no posts in the analysis span");

    b.model = stage("clustering", [&] {
        return clustering::cluster_users(posts, c.threshold, c.k_max, c.smoothing_minutes, exec);
    });
    if (b.model.users.empty())
        b.warnings.push_back("no user reaches " + std::to_string(c.threshold) +
                             " posts; only the infrequent group is analysed");
    else if (b.model.choice.degenerate)
        b.warnings.push_back("frequent users do not support a cluster-count choice; using a single cluster");

    // Solar boundaries feed the day/night partitions.
    stage("solar", [&] {
        const auto tz = TzRule::parse(c.tz);
        std::map<std::string, Coordinate> fallback;
        if (!c.coordinates.empty()) {
            std::ifstream f(c.coordinates);
            if (!f) throw InputError("cannot open coordinates '" + c.coordinates + "'");
            fallback = read_user_coordinates(f);
        }
        const auto coords = resolve_user_coordinates(posts, fallback, {c.centroid_lat, c.centroid_lon});
        Coordinate mean{0.0, 0.0};
        for (const auto& p : coords) {
            mean.lat += p.lat;
            mean.lon += p.lon;
        }
        if (coords.empty()) mean = {c.centroid_lat, c.centroid_lon};
        else {
            mean.lat /= static_cast<double>(coords.size());
            mean.lon /= static_cast<double>(coords.size());
        }
        b.location = mean;
        const CivilDate last = civil_from_days(days_from_civil(c.span_end) - 1);
        b.clock_boundaries = solar::average_boundaries(mean.lat, mean.lon, c.span_first, last, tz);
        for (const auto& m : solar::months_between(c.span_first, last))
            b.sun.push_back(solar::sun_times(mean.lat, mean.lon, m, tz));
        return 0;
    });

    stage("activity", [&] {
        std::map<std::string, std::size_t> index_of;
        for (std::size_t u = 0; u < posts.user_count(); ++u) index_of[posts.users()[u]] = u;
        const std::size_t k = b.model.users.empty() ? 0 : b.model.choice.k;
        std::vector<std::vector<std::size_t>> members(k);
        for (std::size_t i = 0; i < b.model.users.size(); ++i)
            members[static_cast<std::size_t>(b.model.labels[i])].push_back(index_of.at(b.model.users[i]));
        std::vector<std::string> taken;
        for (std::size_t l = 0; l < k; ++l) {
            GroupReport g;
            g.members = std::move(members[l]);
            g.name = unique_name(taken, clustering::chronotype_name(cluster_activity_curve(posts, g.members)));
            b.cluster_names.push_back(g.name);
            b.groups.push_back(std::move(g));
        }
        if (!b.model.infrequent.empty()) {
            GroupReport g;
            g.infrequent = true;
            for (const auto& u : b.model.infrequent) g.members.push_back(index_of.at(u));
            g.name = unique_name(taken, "infrequent");
            b.groups.push_back(std::move(g));
        }
        return 0;
    });

    for (std::size_t i = 0; i < b.groups.size(); ++i)
        stage("analysis", [&] {
            analyze_group(b, b.groups[i], posts, i, exec);
            return 0;
        });

    stage("stats", [&] {
        for (const auto& row : b.groups)
            for (const auto& col : b.groups) {
                if (&row == &col) continue;
                PairwiseTest t{row.name, col.name,
                               stats::mann_whitney_u(row.ratio_spectral.span(), col.ratio_spectral.span(),
                                                     stats::Alternative::Less)};
                b.pairwise.push_back(std::move(t));
            }
        soft(b, "content x cluster chi-square", [&] {
            if (b.groups.size() < 2) throw DegenerateData("needs at least two groups");
            const auto known = CategorySet::known().members();
            std::vector<std::vector<double>> counts(b.groups.size(), std::vector<double>(known.size(), 0.0));
            for (std::size_t gi = 0; gi < b.groups.size(); ++gi)
                for (auto u : b.groups[gi].members) {
                    const auto [lo, hi] = posts.user_rows(u);
                    for (auto r = lo; r < hi; ++r) {
                        const auto cat = posts.category(r);
                        if (!cat) continue;
                        const auto it = std::find(known.begin(), known.end(), *cat);
                        if (it != known.end()) counts[gi][static_cast<std::size_t>(it - known.begin())] += 1.0;
                    }
                }
            std::vector<std::size_t> cols;
            for (std::size_t j = 0; j < known.size(); ++j) {
                double s = 0.0;
                for (const auto& row : counts) s += row[j];
                if (s > 0.0) cols.push_back(j);
            }
            std::vector<double> table;
            for (const auto& row : counts)
                for (auto j : cols) table.push_back(row[j]);
            b.chi_content_cluster = stats::chi_square(table, counts.size(), cols.size());
        });
        soft(b, "lockdown chi-square", [&] {
            const std::int64_t first = days_from_civil(c.lockdown.first), last = days_from_civil(c.lockdown.last);
            std::array<double, 4> t{};
            for (std::size_t r = 0; r < posts.size(); ++r) {
                const auto cat = posts.category(r);
                if (!cat || *cat == ContentCategory::Other) continue;
                const bool in = posts.local_day(r) >= first && posts.local_day(r) <= last;
                t[(in ? 0 : 2) + (is_disinformative(*cat) ? 0 : 1)] += 1.0;
            }
            b.chi_lockdown = stats::chi_square(t, 2, 2);
        });
        return 0;
    });

    if (!input.truth_users.empty() && !b.model.users.empty()) {
        std::map<std::string, int> truth;
        for (std::size_t i = 0; i < input.truth_users.size(); ++i)
            truth[input.truth_users[i]] = static_cast<int>(input.truth_labels[i]);
        std::vector<int> t;
        for (const auto& u : b.model.users) t.push_back(truth.at(u));
        b.ground_truth_ari = clustering::adjusted_rand_index(b.model.labels, t);
    }
    return b;
}

ReportBundle run_pipeline(const RunConfig& config) { return analyze(config, load_input(config)); }

}  // namespace diurnal
