#include "diurnal/config.hpp"

#include <charconv>
#include <cstdio>
#include <map>
#include <sstream>

#include "diurnal/common.hpp"

namespace diurnal {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

template <typename T>
T parse_number(std::string_view key, std::string_view v) {
    T out{};
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || p != v.data() + v.size())
        throw InputError("config: bad value '" + std::string(v) + "' for " + std::string(key));
    return out;
}

CivilDate parse_date_value(std::string_view key, std::string_view v) {
    const auto d = parse_date(v);
    if (!d) throw InputError("config: bad date '" + std::string(v) + "' for " + std::string(key));
    return *d;
}

bool parse_bool(std::string_view key, std::string_view v) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw InputError("config: bad boolean '" + std::string(v) + "' for " + std::string(key));
}

}  // namespace

void RunConfig::set(std::string_view key, std::string_view value) {
    const std::string v(trim(value));
    if (key == "posts") posts = v;
    else if (key == "category_map") category_map = v;
    else if (key == "bot_list") bot_list = v;
    else if (key == "coordinates") coordinates = v;
    else if (key == "synth") synth = v;
    else if (key == "span_first") span_first = parse_date_value(key, v);
    else if (key == "span_end") span_end = parse_date_value(key, v);
    else if (key == "tz") {
        TzRule::parse(v);
        tz = v;
    }
    else if (key == "smoothing_minutes") smoothing_minutes = parse_number<double>(key, v);
    else if (key == "threshold") threshold = parse_number<std::size_t>(key, v);
    else if (key == "k_max") k_max = parse_number<std::size_t>(key, v);
    else if (key == "m_min") m_min = parse_number<std::size_t>(key, v);
    else if (key == "m_max") m_max = parse_number<std::size_t>(key, v);
    else if (key == "wake_hours") wake_hours = parse_number<double>(key, v);
    else if (key == "margin_hours") margin_hours = parse_number<double>(key, v);
    else if (key == "lockdown_first") lockdown.first = parse_date_value(key, v);
    else if (key == "lockdown_last") lockdown.last = parse_date_value(key, v);
    else if (key == "seed") seed = parse_number<std::uint64_t>(key, v);
    else if (key == "dip_bootstrap") dip_bootstrap = parse_number<std::size_t>(key, v);
    else if (key == "dip_sample") dip_sample = parse_number<std::size_t>(key, v);
    else if (key == "extrema") extrema = parse_number<std::size_t>(key, v);
    else if (key == "centroid_lat") centroid_lat = parse_number<double>(key, v);
    else if (key == "centroid_lon") centroid_lon = parse_number<double>(key, v);
    else if (key == "output_dir") output_dir = v;
    else if (key == "threads") threads = parse_number<int>(key, v);
    else if (key == "strict") strict = parse_bool(key, v);
    else if (key == "plots") plots = parse_bool(key, v);
    else throw InputError("config: unknown key '" + std::string(key) + "'");
}

std::string RunConfig::canonical() const {
    std::map<std::string, std::string> kv{
        {"posts", posts},
        {"category_map", category_map},
        {"bot_list", bot_list},
        {"coordinates", coordinates},
        {"synth", synth},
        {"span_first", format_date(span_first)},
        {"span_end", format_date(span_end)},
        {"tz", tz},
        {"smoothing_minutes", format_number(smoothing_minutes)},
        {"threshold", std::to_string(threshold)},
        {"k_max", std::to_string(k_max)},
        {"m_min", std::to_string(m_min)},
        {"m_max", std::to_string(m_max)},
        {"wake_hours", format_number(wake_hours)},
        {"margin_hours", format_number(margin_hours)},
        {"lockdown_first", format_date(lockdown.first)},
        {"lockdown_last", format_date(lockdown.last)},
        {"seed", std::to_string(seed)},
        {"dip_bootstrap", std::to_string(dip_bootstrap)},
        {"dip_sample", std::to_string(dip_sample)},
        {"extrema", std::to_string(extrema)},
        {"centroid_lat", format_number(centroid_lat)},
        {"centroid_lon", format_number(centroid_lon)},
    };
    std::string out;
    for (const auto& [k, v] : kv) out += k + " = " + v + "\n";
    return out;
}

std::string RunConfig::hash() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : canonical()) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

RunConfig read_config(std::istream& in, RunConfig base) {
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        ++n;
        std::string_view s = line;
        bool quoted = false;
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (s[i] == '"') quoted = !quoted;
            if (s[i] == '#' && !quoted) {
                s = s.substr(0, i);
                break;
            }
        }
        s = trim(s);
        if (s.empty() || s.front() == '[') continue;
        const auto eq = s.find('=');
        if (eq == std::string_view::npos)
            throw InputError("config line " + std::to_string(n) + ": expected key = value");
        const auto key = trim(s.substr(0, eq));
        auto value = trim(s.substr(eq + 1));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
            value = value.substr(1, value.size() - 2);
        base.set(key, value);
    }
    return base;
}

}  // namespace diurnal
