#include "diurnal/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "diurnal/common.hpp"

namespace diurnal {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json curve_json(const DiurnalCurve& c) {
    json a = json::array();
    for (double v : c.values()) a.push_back(number_or_null(v));
    return a;
}

json masked_json(const ratios::RatioSeries& s) {
    json a = json::array();
    for (std::size_t b = 0; b < kBins; ++b) a.push_back(s.masked[b] ? json(nullptr) : number_or_null(s.values[b]));
    return a;
}

json test_json(const stats::TestResult& r) {
    return {{"method", std::string(stats::to_string(r.method))},
            {"statistic", number_or_null(r.statistic)},
            {"p_value", number_or_null(r.p_value)},
            {"n", r.n},
            {"n2", r.n2},
            {"df", r.df},
            {"alternative", std::string(stats::to_string(r.alternative))},
            {"exact", r.exact}};
}

json optional_test(const std::optional<stats::TestResult>& r) { return r ? test_json(*r) : json(nullptr); }

json optional_number(const std::optional<double>& v) { return v ? number_or_null(*v) : json(nullptr); }

json budget_json(const spectral::BudgetSelection& s) {
    json votes = json::object(), dist = json::object();
    for (const auto& [m, v] : s.votes) votes[std::string(curvedist::to_string(m))] = v;
    for (const auto& [m, v] : s.distances) {
        json a = json::array();
        for (double d : v) a.push_back(number_or_null(d));
        dist[std::string(curvedist::to_string(m))] = a;
    }
    return {{"m", s.m}, {"m_min", s.m_min}, {"m_max", s.m_max}, {"votes", votes}, {"distances", dist}};
}

std::string fmt(double v) { return format_number(v); }

std::string hhmm_or_empty(double h) { return std::isfinite(h) ? format_hhmm(h) : ""; }

class Emitter {
public:
    Emitter(fs::path dir, std::string hash) : dir_(std::move(dir)), hash_(std::move(hash)) {}

    // CSV tables open with a comment line carrying the config hash.
    std::ofstream csv(const std::string& name) {
        auto f = open(name);
        f << "# config_hash=" << hash_ << '\n';
        return f;
    }
    std::ofstream open(const std::string& name) {
        const auto p = dir_ / name;
        std::ofstream f(p, std::ios::binary);
        if (!f) throw InputError("cannot write '" + p.string() + "'");
        written_.push_back(p);
        return f;
    }
    std::vector<fs::path> written() const { return written_; }

private:
    fs::path dir_;
    std::string hash_;
    std::vector<fs::path> written_;
};

std::string safe(const std::string& name) {
    std::string s = name;
    for (auto& ch : s)
        if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '_' && ch != '-') ch = '_';
    return s;
}

// ---------------------------------------------------------------------------
// SVG

const char* kPalette[] = {"#e69f00", "#56b4e9", "#009e73", "#cc79a7", "#0072b2", "#d55e00", "#999999", "#f0e442"};

std::string f2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string svg_open(double w, double h, const std::string& hash) {
    return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + f2(w) + "\" height=\"" + f2(h) +
           "\" viewBox=\"0 0 " + f2(w) + " " + f2(h) + "\" font-family=\"sans-serif\" font-size=\"11\">\n" +
           "<!-- config_hash=" + hash + " -->\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

std::vector<double> values_of(const json& a) {
    std::vector<double> out;
    for (const auto& v : a) out.push_back(v.is_null() ? std::nan("") : v.get<double>());
    return out;
}

// Line chart of several 96-bin series over the clock day.
std::string line_chart(const std::string& title, const std::vector<std::pair<std::string, std::vector<double>>>& series,
                       const std::string& hash) {
    const double w = 720, h = 360, l = 60, r = 150, t = 30, bm = 40;
    double lo = 0.0, hi = 0.0;
    bool first = true;
    for (const auto& [_, v] : series)
        for (double x : v) {
            if (!std::isfinite(x)) continue;
            if (first) lo = hi = x, first = false;
            lo = std::min(lo, x);
            hi = std::max(hi, x);
        }
    lo = std::min(lo, 0.0);
    if (!(hi > lo)) hi = lo + 1.0;
    const double pw = w - l - r, ph = h - t - bm;
    auto X = [&](double bin) { return l + pw * bin / 96.0; };
    auto Y = [&](double v) { return t + ph * (1.0 - (v - lo) / (hi - lo)); };
    std::string s = svg_open(w, h, hash);
    s += "<text x=\"" + f2(l) + "\" y=\"18\" font-size=\"13\">" + title + "</text>\n";
    s += "<rect x=\"" + f2(l) + "\" y=\"" + f2(t) + "\" width=\"" + f2(pw) + "\" height=\"" + f2(ph) +
         "\" fill=\"none\" stroke=\"#444\"/>\n";
    for (int hr = 0; hr <= 24; hr += 3) {
        const double x = X(hr * 4.0);
        s += "<line x1=\"" + f2(x) + "\" y1=\"" + f2(t + ph) + "\" x2=\"" + f2(x) + "\" y2=\"" + f2(t + ph + 4) +
             "\" stroke=\"#444\"/>\n";
        s += "<text x=\"" + f2(x) + "\" y=\"" + f2(t + ph + 16) + "\" text-anchor=\"middle\">" +
             format_hhmm(hr == 24 ? 0 : hr) + "</text>\n";
    }
    for (int i = 0; i <= 4; ++i) {
        const double v = lo + (hi - lo) * i / 4.0;
        s += "<text x=\"" + f2(l - 4) + "\" y=\"" + f2(Y(v) + 4) + "\" text-anchor=\"end\">" + f2(v * 100.0) +
             "</text>\n";
    }
    std::size_t idx = 0;
    for (const auto& [name, v] : series) {
        const std::string color = kPalette[idx % std::size(kPalette)];
        std::string pts;
        for (std::size_t b = 0; b < v.size(); ++b) {
            if (!std::isfinite(v[b])) continue;
            pts += f2(X(b + 0.5)) + "," + f2(Y(v[b])) + " ";
        }
        s += "<polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"1.6\" points=\"" + pts + "\"/>\n";
        const double ly = t + 14.0 * static_cast<double>(idx) + 8.0;
        s += "<line x1=\"" + f2(w - r + 10) + "\" y1=\"" + f2(ly) + "\" x2=\"" + f2(w - r + 28) + "\" y2=\"" + f2(ly) +
             "\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
        s += "<text x=\"" + f2(w - r + 32) + "\" y=\"" + f2(ly + 4) + "\">" + name + "</text>\n";
        ++idx;
    }
    s += "<text x=\"14\" y=\"" + f2(t + ph / 2) + "\" transform=\"rotate(-90 14 " + f2(t + ph / 2) +
         ")\" text-anchor=\"middle\">% of posts</text>\n";
    return s + "</svg>\n";
}

std::string heatmap_svg(const std::string& title, const json& heatmap, const std::string& hash) {
    const auto& months = heatmap.at("months");
    const auto& rows = heatmap.at("rows");
    const double cell_w = 6.0, cell_h = 10.0, l = 70, t = 30;
    const double w = l + cell_w * 96 + 20, h = t + cell_h * static_cast<double>(rows.size()) + 30;
    double hi = 0.0;
    for (const auto& row : rows)
        for (const auto& v : row)
            if (!v.is_null()) hi = std::max(hi, v.get<double>());
    if (!(hi > 0.0)) hi = 1.0;
    std::string s = svg_open(w, h, hash);
    s += "<text x=\"" + f2(l) + "\" y=\"18\" font-size=\"13\">" + title + "</text>\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const double y = t + cell_h * static_cast<double>(i);
        s += "<text x=\"" + f2(l - 4) + "\" y=\"" + f2(y + cell_h - 2) + "\" text-anchor=\"end\" font-size=\"8\">" +
             months[i].get<std::string>().substr(0, 7) + "</text>\n";
        for (std::size_t b = 0; b < rows[i].size(); ++b) {
            std::string fill = "#bbbbbb";
            if (!rows[i][b].is_null()) {
                const double z = std::clamp(rows[i][b].get<double>() / hi, 0.0, 1.0);
                const int g = static_cast<int>(std::lround(255.0 * (1.0 - z)));
                char buf[16];
                std::snprintf(buf, sizeof buf, "#%02x%02x%02x", 255, g, g);
                fill = buf;
            }
            s += "<rect x=\"" + f2(l + cell_w * static_cast<double>(b)) + "\" y=\"" + f2(y) + "\" width=\"" +
                 f2(cell_w) + "\" height=\"" + f2(cell_h) + "\" fill=\"" + fill + "\"/>\n";
        }
    }
    for (int hr = 0; hr <= 24; hr += 3)
        s += "<text x=\"" + f2(l + cell_w * hr * 4) + "\" y=\"" + f2(h - 10) + "\" text-anchor=\"middle\">" +
             format_hhmm(hr == 24 ? 0 : hr) + "</text>\n";
    return s + "</svg>\n";
}

std::string clock_svg(const json& groups, const std::string& hash) {
    const double w = 420, h = 420, cx = 210, cy = 210;
    std::string s = svg_open(w, h, hash);
    auto point = [&](double hour, double radius) {
        const double a = hour / 24.0 * 2.0 * std::numbers::pi - std::numbers::pi / 2.0;
        return std::pair{cx + radius * std::cos(a), cy + radius * std::sin(a)};
    };
    s += "<circle cx=\"" + f2(cx) + "\" cy=\"" + f2(cy) + "\" r=\"170\" fill=\"none\" stroke=\"#444\"/>\n";
    for (int hr = 0; hr < 24; hr += 3) {
        const auto [x, y] = point(hr, 185);
        s += "<text x=\"" + f2(x) + "\" y=\"" + f2(y + 4) + "\" text-anchor=\"middle\">" + format_hhmm(hr) +
             "</text>\n";
    }
    std::size_t idx = 0;
    for (const auto& g : groups) {
        const std::string color = kPalette[idx % std::size(kPalette)];
        const double radius = 150.0 - 18.0 * static_cast<double>(idx);
        const double onset = g.at("wake").at("onset").get<double>();
        const double len = g.at("wake").at("length_hours").get<double>();
        const auto [x0, y0] = point(onset, radius);
        const auto [x1, y1] = point(onset + len, radius);
        s += "<path d=\"M " + f2(x0) + " " + f2(y0) + " A " + f2(radius) + " " + f2(radius) + " 0 " +
             (len > 12.0 ? "1" : "0") + " 1 " + f2(x1) + " " + f2(y1) + "\" fill=\"none\" stroke=\"" + color +
             "\" stroke-width=\"10\" stroke-opacity=\"0.7\"/>\n";
        const auto [lx, ly] = point(onset, radius);
        s += "<text x=\"" + f2(lx + 6) + "\" y=\"" + f2(ly - 6) + "\" fill=\"" + color + "\">" +
             g.at("name").get<std::string>() + "</text>\n";
        ++idx;
    }
    return s + "</svg>\n";
}

}  // namespace

json to_json(const ReportBundle& b) {
    json j;
    j["config_hash"] = b.config_hash;
    {
        json cfg = json::object();
        std::istringstream lines(b.config.canonical());
        std::string line;
        while (std::getline(lines, line)) {
            const auto eq = line.find(" = ");
            cfg[line.substr(0, eq)] = line.substr(eq + 3);
        }
        j["config"] = cfg;
    }
    const auto& c = b.counters;
    j["ingest"] = {{"rows_read", c.rows_read},         {"rejected", c.rejected},
                   {"duplicates_dropped", c.duplicates_dropped}, {"out_of_span", c.out_of_span},
                   {"bot_removed", c.bot_removed},     {"category_mapped", c.category_mapped},
                   {"category_other", c.category_other}, {"dst_gap", c.dst_gap},
                   {"dst_overlap", c.dst_overlap}};
    j["posts"] = b.post_count;
    j["users"] = b.user_count;

    json votes = json::object();
    for (const auto& [idx, k] : b.model.choice.votes) votes[std::string(clustering::to_string(idx))] = k;
    json scores = json::array();
    for (const auto& r : b.model.choice.rows)
        scores.push_back({{"k", r.k},
                          {"wss", number_or_null(r.wss)},
                          {"cop", number_or_null(r.cop)},
                          {"calinski_harabasz", number_or_null(r.calinski_harabasz)},
                          {"davies_bouldin", number_or_null(r.davies_bouldin)},
                          {"dunn", number_or_null(r.dunn)},
                          {"silhouette", number_or_null(r.silhouette)}});
    j["clustering"] = {{"k", b.model.users.empty() ? 0 : b.model.choice.k},
                       {"degenerate", b.model.choice.degenerate},
                       {"frequent_users", b.model.users.size()},
                       {"infrequent_users", b.model.infrequent.size()},
                       {"cluster_names", b.cluster_names},
                       {"votes", votes},
                       {"scores", scores}};
    j["location"] = {{"lat", b.location.lat}, {"lon", b.location.lon}};
    j["clock_boundaries"] = {{"sunrise", b.clock_boundaries.sunrise}, {"sunset", b.clock_boundaries.sunset}};

    j["groups"] = json::array();
    for (const auto& g : b.groups) {
        json gj;
        gj["name"] = g.name;
        gj["infrequent"] = g.infrequent;
        gj["users"] = g.members.size();
        gj["posts"] = g.post_count;
        gj["activity"] = {{"raw", curve_json(g.raw)},
                          {"smoothed", curve_json(g.smoothed)},
                          {"spectral", curve_json(g.spectral)},
                          {"aligned", curve_json(g.aligned)},
                          {"budget", budget_json(g.budget)}};
        gj["wake"] = {{"onset", g.wake.onset},
                      {"end", g.wake.end()},
                      {"length_hours", g.wake.length_hours},
                      {"window_sum", number_or_null(g.wake.window_sum)},
                      {"degenerate", g.wake.degenerate}};
        json ex = json::array();
        for (const auto& e : g.extrema)
            ex.push_back({{"kind", std::string(rhythm::to_string(e.kind))}, {"hour", e.hour}, {"value", e.value}});
        gj["extrema"] = ex;
        gj["ratio"] = {{"raw", masked_json(g.ratio)},
                       {"smoothed", curve_json(g.ratio_smoothed)},
                       {"spectral", curve_json(g.ratio_spectral)},
                       {"budget", budget_json(g.ratio_budget)},
                       {"susceptibility_bins", g.susceptibility}};
        json months = json::array(), rows = json::array();
        for (std::size_t i = 0; i < g.heatmap.months.size(); ++i) {
            months.push_back(format_date(g.heatmap.months[i]));
            rows.push_back(masked_json(g.heatmap.rows[i]));
        }
        gj["heatmap"] = {{"months", months}, {"rows", rows}};
        if (g.lockdown) {
            const auto& p = *g.lockdown;
            gj["lockdown"] = {{"days_in", p.days_in},
                              {"days_out", p.days_out},
                              {"posts_per_day_user_in", number_or_null(p.posts_per_day_user_in)},
                              {"posts_per_day_user_out", optional_number(p.posts_per_day_user_out)},
                              {"disinfo_per_day_user_in", number_or_null(p.disinfo_per_day_user_in)},
                              {"disinfo_per_day_user_out", optional_number(p.disinfo_per_day_user_out)},
                              {"ratio_in", optional_number(p.ratio_in)},
                              {"ratio_out", optional_number(p.ratio_out)},
                              {"posts_delta", optional_number(p.posts_delta())},
                              {"disinfo_delta", optional_number(p.disinfo_delta())},
                              {"ratio_delta", optional_number(p.ratio_delta())}};
        } else {
            gj["lockdown"] = nullptr;
        }
        gj["tests"] = {{"dip_coarse", optional_test(g.dip_coarse)},
                       {"dip_smooth", optional_test(g.dip_smooth)},
                       {"spearman_posts_ratio", optional_test(g.spearman_posts_ratio)},
                       {"spearman_activity_raw", optional_test(g.spearman_activity_raw)},
                       {"spearman_activity_smooth", optional_test(g.spearman_activity_smooth)}};
        json dn = json::array();
        for (const auto& d : g.day_night)
            dn.push_back({{"partition", d.partition},
                          {"day_start", number_or_null(d.day_start)},
                          {"day_end", number_or_null(d.day_end)},
                          {"n_day", d.n_day},
                          {"n_night", d.n_night},
                          {"two_sided", test_json(d.two_sided)},
                          {"night_greater", test_json(d.night_greater)},
                          {"lower", d.lower}});
        gj["day_night"] = dn;
        j["groups"].push_back(gj);
    }
    j["pairwise"] = json::array();
    for (const auto& p : b.pairwise) j["pairwise"].push_back({{"row", p.row}, {"col", p.col}, {"test", test_json(p.result)}});
    j["chi_content_cluster"] = optional_test(b.chi_content_cluster);
    j["chi_lockdown"] = optional_test(b.chi_lockdown);
    j["sun"] = json::array();
    for (const auto& s : b.sun)
        j["sun"].push_back({{"date", format_date(s.date)},
                            {"sunrise", optional_number(s.sunrise)},
                            {"sunset", optional_number(s.sunset)},
                            {"flag", std::string(solar::to_string(s.flag))}});
    j["ground_truth_ari"] = optional_number(b.ground_truth_ari);
    j["warnings"] = b.warnings;
    return j;
}

std::vector<fs::path> emit_report(const ReportBundle& b, const fs::path& dir, bool plots) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw InputError("cannot create output directory '" + dir.string() + "': " + ec.message());
    Emitter e(dir, b.config_hash);

    {
        auto f = e.open("config.txt");
        f << "# config_hash=" << b.config_hash << '\n' << b.config.canonical();
    }
    {
        auto f = e.csv("assignments.csv");
        clustering::write_assignments_csv(f, b.model, b.cluster_names);
    }
    {
        auto f = e.csv("index_scores.csv");
        clustering::write_index_scores_csv(f, b.model.choice);
    }
    {
        auto f = e.csv("wake_windows.csv");
        f << "group,onset,end,window_sum,degenerate\n";
        for (const auto& g : b.groups)
            f << g.name << ',' << format_hhmm(g.wake.onset) << ',' << format_hhmm(g.wake.end()) << ','
              << fmt(g.wake.window_sum) << ',' << (g.wake.degenerate ? "true" : "false") << '\n';
    }
    {
        auto f = e.csv("extrema.csv");
        f << "group,kind,time,value\n";
        for (const auto& g : b.groups)
            for (const auto& x : g.extrema)
                f << g.name << ',' << rhythm::to_string(x.kind) << ',' << format_hhmm(x.hour) << ',' << fmt(x.value)
                  << '\n';
    }
    {
        auto f = e.csv("budgets.csv");
        f << "group,series,m\n";
        for (const auto& g : b.groups)
            f << g.name << ",activity," << g.budget.m << '\n' << g.name << ",ratio," << g.ratio_budget.m << '\n';
    }
    {
        auto f = e.csv("day_night.csv");
        f << "group,partition,day_start,day_end,n_day,n_night,U,p_two_sided,p_night_greater,lower\n";
        for (const auto& g : b.groups)
            for (const auto& d : g.day_night)
                f << g.name << ',' << d.partition << ',' << hhmm_or_empty(d.day_start) << ','
                  << hhmm_or_empty(d.day_end) << ',' << d.n_day << ',' << d.n_night << ','
                  << fmt(d.two_sided.statistic) << ',' << fmt(d.two_sided.p_value) << ','
                  << fmt(d.night_greater.p_value) << ',' << d.lower << '\n';
    }
    {
        auto f = e.csv("lockdown.csv");
        f << "group,days_in,days_out,posts_per_day_user_in,posts_per_day_user_out,disinfo_per_day_user_in,"
             "disinfo_per_day_user_out,ratio_in,ratio_out\n";
        auto opt = [](const std::optional<double>& v) { return v ? fmt(*v) : std::string(); };
        for (const auto& g : b.groups) {
            if (!g.lockdown) continue;
            const auto& p = *g.lockdown;
            f << g.name << ',' << p.days_in << ',' << p.days_out << ',' << fmt(p.posts_per_day_user_in) << ','
              << opt(p.posts_per_day_user_out) << ',' << fmt(p.disinfo_per_day_user_in) << ','
              << opt(p.disinfo_per_day_user_out) << ',' << opt(p.ratio_in) << ',' << opt(p.ratio_out) << '\n';
        }
    }
    {
        auto f = e.csv("pairwise_mann_whitney.csv");
        f << "row,col,U,p_less\n";
        for (const auto& p : b.pairwise)
            f << p.row << ',' << p.col << ',' << fmt(p.result.statistic) << ',' << fmt(p.result.p_value) << '\n';
    }
    {
        auto f = e.csv("tests.csv");
        f << "group,test,method,statistic,p_value,n,n2,df\n";
        auto row = [&](const std::string& group, const std::string& name, const std::optional<stats::TestResult>& r) {
            if (!r) return;
            f << group << ',' << name << ',' << stats::to_string(r->method) << ',' << fmt(r->statistic) << ','
              << fmt(r->p_value) << ',' << r->n << ',' << r->n2 << ',' << r->df << '\n';
        };
        for (const auto& g : b.groups) {
            row(g.name, "dip_coarse", g.dip_coarse);
            row(g.name, "dip_smooth", g.dip_smooth);
            row(g.name, "spearman_posts_ratio", g.spearman_posts_ratio);
            row(g.name, "spearman_activity_raw", g.spearman_activity_raw);
            row(g.name, "spearman_activity_smooth", g.spearman_activity_smooth);
        }
        row("all", "chi_content_cluster", b.chi_content_cluster);
        row("all", "chi_lockdown", b.chi_lockdown);
    }
    {
        auto f = e.csv("sun_times.csv");
        solar::write_sun_times_csv(f, b.sun);
    }
    for (const auto& g : b.groups) {
        const std::string n = safe(g.name);
        {
            auto f = e.csv("curves_" + n + ".csv");
            f << "bin_start,raw,smoothed,spectral,aligned\n";
            for (std::size_t bin = 0; bin < kBins; ++bin)
                f << format_hhmm(bin_start_hour(bin)) << ',' << fmt(g.raw[bin]) << ',' << fmt(g.smoothed[bin]) << ','
                  << fmt(g.spectral[bin]) << ',' << fmt(g.aligned[bin]) << '\n';
        }
        {
            auto f = e.csv("spectrum_" + n + ".csv");
            spectral::write_decomposition_csv(f, g.spectrum);
        }
        {
            auto f = e.csv("ratio_" + n + ".csv");
            ratios::write_ratio_csv(f, g.ratio, &g.ratio_smoothed);
        }
        {
            auto f = e.csv("heatmap_" + n + ".csv");
            ratios::write_heatmap_csv(f, g.heatmap);
        }
    }
    const json j = to_json(b);
    {
        auto f = e.open("bundle.json");
        f << j.dump(1) << '\n';
    }
    auto out = e.written();
    if (plots) {
        const auto p = render_plots(j, dir);
        out.insert(out.end(), p.begin(), p.end());
    }
    return out;
}

std::vector<fs::path> render_plots(const json& j, const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw InputError("cannot create output directory '" + dir.string() + "'");
    Emitter e(dir, j.at("config_hash").get<std::string>());
    const std::string hash = j.at("config_hash").get<std::string>();
    const auto& groups = j.at("groups");

    std::vector<std::pair<std::string, std::vector<double>>> act, rat;
    for (const auto& g : groups) {
        act.emplace_back(g.at("name").get<std::string>(), values_of(g.at("activity").at("spectral")));
        rat.emplace_back(g.at("name").get<std::string>(), values_of(g.at("ratio").at("spectral")));
    }
    e.open("activity.svg") << line_chart("Activity by time of day (Fourier-smoothed)", act, hash);
    e.open("ratios.svg") << line_chart("Share of potentially disinformative content (Fourier-smoothed)", rat, hash);
    for (const auto& g : groups) {
        const std::string name = g.at("name").get<std::string>();
        e.open("heatmap_" + safe(name) + ".svg") << heatmap_svg("Disinformative share by month: " + name,
                                                                g.at("heatmap"), hash);
    }
    e.open("clock.svg") << clock_svg(groups, hash);
    return e.written();
}

}  // namespace diurnal
