#include "diurnal/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

#include <json.hpp>

#include "diurnal/common.hpp"
#include "diurnal/rng.hpp"

namespace diurnal::synth {

using nlohmann::json;

namespace {

bool in_hours(double start, double end, double h) {
    if (start <= end) return h >= start && h < end;
    return h >= start || h < end;
}

std::size_t pick(const std::vector<double>& cumulative, double u) {
    const double target = u * cumulative.back();
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), target);
    return std::min(static_cast<std::size_t>(it - cumulative.begin()), cumulative.size() - 1);
}

std::vector<double> cumulate(const std::vector<double>& w) {
    std::vector<double> c(w.size());
    double s = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) c[i] = s += w[i];
    return c;
}

// Category cumulative tables for each of the 96 bins.
std::vector<std::vector<double>> category_tables(const Population& p) {
    std::vector<std::vector<double>> out(kBins);
    for (std::size_t b = 0; b < kBins; ++b) {
        const double h = static_cast<double>(b) * kBinHours + kBinHours / 2.0;
        std::vector<double> w(p.propensity.begin(), p.propensity.end());
        for (const auto& s : p.surges) {
            if (!in_hours(s.start_hour, s.end_hour, h)) continue;
            for (std::size_t c = 0; c < kCategoryCount; ++c)
                if (s.categories.contains(kAllCategories[c])) w[c] *= s.multiplier;
        }
        out[b] = cumulate(w);
    }
    return out;
}

std::string user_name(const std::string& prefix, std::size_t i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "_%05zu", i);
    return prefix + buf;
}

CategorySet parse_category_list(const json& j) {
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "disinformative") return CategorySet::disinformative();
        if (s == "known") return CategorySet::known();
        if (s == "all") return CategorySet::all();
        const auto c = parse_category(s);
        if (!c) throw InputError("unknown category '" + s + "'");
        return {*c};
    }
    CategorySet set;
    for (const auto& e : j) {
        const auto c = parse_category(e.get<std::string>());
        if (!c) throw InputError("unknown category '" + e.get<std::string>() + "'");
        set.insert(*c);
    }
    return set;
}

CivilDate date_field(const json& j, const char* key, CivilDate fallback) {
    if (!j.contains(key)) return fallback;
    const auto d = parse_date(j.at(key).get<std::string>());
    if (!d) throw InputError(std::string("bad date in '") + key + "'");
    return *d;
}

}  // namespace

void SynthSpec::validate() const {
    if (populations.empty()) throw std::invalid_argument("synthetic spec has no populations");
    if (days_from_civil(end_day) <= days_from_civil(first_day)) throw std::invalid_argument("empty date range");
    for (const auto& p : populations) {
        const std::string where = "population '" + p.name + "': ";
        if (p.name.empty()) throw std::invalid_argument("population without a name");
        if (p.size < 1) throw std::invalid_argument(where + "size must be at least 1");
        if (p.posts_min < 1 || p.posts_max < p.posts_min) throw std::invalid_argument(where + "bad posts range");
        if (p.mixture.empty()) throw std::invalid_argument(where + "empty mixture");
        double wsum = 0.0;
        for (const auto& c : p.mixture) {
            if (!(c.weight >= 0.0) || !(c.concentration >= 0.0) || !std::isfinite(c.peak_hour))
                throw std::invalid_argument(where + "bad mixture component");
            wsum += c.weight;
        }
        if (!(wsum > 0.0)) throw std::invalid_argument(where + "mixture weights sum to zero");
        double psum = 0.0;
        for (double v : p.propensity) {
            if (!(v >= 0.0)) throw std::invalid_argument(where + "negative propensity");
            psum += v;
        }
        if (std::abs(psum - 1.0) > 1e-9) throw std::invalid_argument(where + "propensities must sum to 1");
        for (const auto& s : p.surges)
            if (!(s.multiplier >= 0.0) || s.start_hour < 0.0 || s.start_hour >= 24.0 || s.end_hour < 0.0 ||
                s.end_hour > 24.0)
                throw std::invalid_argument(where + "bad surge");
        if (!(p.lockdown_multiplier > 0.0)) throw std::invalid_argument(where + "lockdown multiplier must be positive");
    }
}

SynthOutput generate(const SynthSpec& spec, std::uint64_t seed) {
    spec.validate();
    const auto tz = TzRule::parse(spec.tz);
    const std::int64_t day0 = days_from_civil(spec.first_day);
    const std::int64_t day_end = days_from_civil(spec.end_day);
    const std::int64_t lock_first = days_from_civil(spec.lockdown.first);
    const std::int64_t lock_last = days_from_civil(spec.lockdown.last);

    SynthOutput out;
    std::vector<PostRecord> rows;
    std::uint64_t stream = 0;
    for (std::size_t pi = 0; pi < spec.populations.size(); ++pi) {
        const auto& p = spec.populations[pi];
        std::vector<double> day_w;
        for (std::int64_t d = day0; d < day_end; ++d)
            day_w.push_back(d >= lock_first && d <= lock_last ? p.lockdown_multiplier : 1.0);
        const auto day_c = cumulate(day_w);
        std::vector<double> mix_w;
        for (const auto& c : p.mixture) mix_w.push_back(c.weight);
        const auto mix_c = cumulate(mix_w);
        const auto cat_c = category_tables(p);

        for (std::size_t u = 0; u < p.size; ++u) {
            Rng rng(seed, stream++);
            const std::string id = user_name(p.name, u);
            out.users.push_back(id);
            out.population.push_back(pi);
            const auto count = static_cast<std::size_t>(
                rng.integer(static_cast<std::int64_t>(p.posts_min), static_cast<std::int64_t>(p.posts_max)));
            for (std::size_t k = 0; k < count; ++k) {
                const std::int64_t day = day0 + static_cast<std::int64_t>(pick(day_c, rng.uniform()));
                const auto& comp = p.mixture[pick(mix_c, rng.uniform())];
                const double mu = comp.peak_hour / 24.0 * 2.0 * std::numbers::pi;
                double hour = rng.von_mises(mu, comp.concentration) / (2.0 * std::numbers::pi) * 24.0;
                hour = std::fmod(hour, 24.0);
                if (hour < 0.0) hour += 24.0;
                const auto second = std::min<std::int64_t>(static_cast<std::int64_t>(hour * 3600.0), 86399);
                const UnixSeconds local = day * 86400 + second;
                UnixSeconds utc = local - tz.offset_minutes(local) * 60;
                utc = local - tz.offset_minutes(utc) * 60;
                const std::size_t bin = static_cast<std::size_t>(second / 900);
                const auto cat = kAllCategories[pick(cat_c[bin], rng.uniform())];
                const double kr = rng.uniform();
                PostRecord r;
                r.timestamp = utc;
                r.user_id = id;
                r.kind = kr < 0.6 ? PostKind::Tweet : kr < 0.9 ? PostKind::Retweet : PostKind::Reply;
                r.category = cat;
                rows.push_back(std::move(r));
            }
        }
    }
    const auto span = AnalysisSpan::from_dates(spec.first_day, spec.end_day);
    // Local-time days can spill a couple of hours past the UTC span edges.
    std::erase_if(rows, [&](const PostRecord& r) { return !span.contains(r.timestamp); });
    out.posts = PostTable::build(std::move(rows), span);
    return out;
}

SynthSpec parse_spec(std::istream& in) {
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw InputError(std::string("synthetic spec: ") + e.what());
    }
    SynthSpec spec;
    try {
        spec.first_day = date_field(j, "first_day", spec.first_day);
        spec.end_day = date_field(j, "end_day", spec.end_day);
        if (j.contains("lockdown")) {
            spec.lockdown.first = date_field(j["lockdown"], "first", spec.lockdown.first);
            spec.lockdown.last = date_field(j["lockdown"], "last", spec.lockdown.last);
        }
        spec.tz = j.value("tz", spec.tz);
        for (const auto& pj : j.at("populations")) {
            Population p;
            p.name = pj.at("name").get<std::string>();
            p.size = pj.at("size").get<std::size_t>();
            const auto& posts = pj.at("posts");
            p.posts_min = posts.at(0).get<std::size_t>();
            p.posts_max = posts.at(1).get<std::size_t>();
            for (const auto& cj : pj.at("mixture"))
                p.mixture.push_back({cj.at("peak").get<double>(), cj.at("kappa").get<double>(),
                                     cj.value("weight", 1.0)});
            if (pj.contains("propensity")) {
                for (auto it = pj["propensity"].begin(); it != pj["propensity"].end(); ++it) {
                    const auto c = parse_category(it.key());
                    if (!c) throw InputError("unknown category '" + it.key() + "'");
                    p.propensity[static_cast<std::size_t>(*c)] = it.value().get<double>();
                }
            } else {
                p.propensity = default_propensity();
            }
            if (pj.contains("surges"))
                for (const auto& sj : pj["surges"])
                    p.surges.push_back({sj.at("start").get<double>(), sj.at("end").get<double>(),
                                        sj.contains("categories") ? parse_category_list(sj["categories"])
                                                                  : CategorySet::disinformative(),
                                        sj.value("multiplier", 2.0)});
            p.lockdown_multiplier = pj.value("lockdown_multiplier", 1.0);
            spec.populations.push_back(std::move(p));
        }
    } catch (const json::exception& e) {
        throw InputError(std::string("synthetic spec: ") + e.what());
    }
    try {
        spec.validate();
    } catch (const std::invalid_argument& e) {
        throw InputError(std::string("synthetic spec: ") + e.what());
    }
    return spec;
}

void write_spec(std::ostream& out, const SynthSpec& spec) {
    json j;
    j["first_day"] = format_date(spec.first_day);
    j["end_day"] = format_date(spec.end_day);
    j["lockdown"] = {{"first", format_date(spec.lockdown.first)}, {"last", format_date(spec.lockdown.last)}};
    j["tz"] = spec.tz;
    j["populations"] = json::array();
    for (const auto& p : spec.populations) {
        json pj;
        pj["name"] = p.name;
        pj["size"] = p.size;
        pj["posts"] = {p.posts_min, p.posts_max};
        pj["mixture"] = json::array();
        for (const auto& c : p.mixture)
            pj["mixture"].push_back({{"peak", c.peak_hour}, {"kappa", c.concentration}, {"weight", c.weight}});
        json prop = json::object();
        for (std::size_t c = 0; c < kCategoryCount; ++c)
            prop[std::string(to_string(kAllCategories[c]))] = p.propensity[c];
        pj["propensity"] = prop;
        pj["surges"] = json::array();
        for (const auto& s : p.surges) {
            json cats = json::array();
            for (auto c : s.categories.members()) cats.push_back(std::string(to_string(c)));
            pj["surges"].push_back(
                {{"start", s.start_hour}, {"end", s.end_hour}, {"categories", cats}, {"multiplier", s.multiplier}});
        }
        pj["lockdown_multiplier"] = p.lockdown_multiplier;
        j["populations"].push_back(pj);
    }
    out << j.dump(2) << '\n';
}

std::array<double, kCategoryCount> default_propensity() {
    // science, mainstream, satire, clickbait, other, political, fake, conspiracy
    return {0.10, 0.40, 0.02, 0.05, 0.25, 0.08, 0.05, 0.05};
}

SynthSpec chronotype_spec(std::size_t users_each, std::size_t posts_min, std::size_t posts_max) {
    SynthSpec spec;
    auto add = [&](std::string name, double peak) {
        Population p;
        p.name = std::move(name);
        p.size = users_each;
        p.posts_min = posts_min;
        p.posts_max = posts_max;
        p.mixture = {{peak, 3.0, 0.8}, {0.0, 0.0, 0.2}};
        p.propensity = default_propensity();
        spec.populations.push_back(std::move(p));
    };
    add("morning", 9.25);
    add("intermediate", 12.0);
    add("evening", 22.25);
    return spec;
}

SynthSpec nocturnal_surge_spec(std::size_t users_each, std::size_t posts_min, std::size_t posts_max,
                               std::size_t infrequent_users) {
    SynthSpec spec = chronotype_spec(users_each, posts_min, posts_max);
    Population inf;
    inf.name = "infrequent";
    inf.size = infrequent_users;
    inf.posts_min = 20;
    inf.posts_max = 200;
    inf.mixture = {{14.0, 1.0, 0.8}, {0.0, 0.0, 0.2}};
    inf.propensity = default_propensity();
    spec.populations.push_back(std::move(inf));
    for (auto& p : spec.populations) {
        // A mild elevation through the night with a sharper surge at 02:30-04:15.
        p.surges = {{18.75, 6.5, CategorySet::disinformative(), 1.5},
                    {2.5, 4.25, CategorySet::disinformative(), 2.0}};
    }
    return spec;
}

void write_truth_csv(std::ostream& out, const SynthOutput& data, const SynthSpec& spec) {
    out << "user,population\n";
    for (std::size_t i = 0; i < data.users.size(); ++i)
        out << data.users[i] << ',' << spec.populations[data.population[i]].name << '\n';
}

}  // namespace diurnal::synth
