#include "diurnal/timeutil.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace diurnal {

namespace chr = std::chrono;

namespace {

constexpr std::int64_t kDay = 86400;

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

bool read_int(std::string_view s, std::size_t pos, std::size_t len, int& out) {
    if (pos + len > s.size()) return false;
    for (std::size_t i = pos; i < pos + len; ++i)
        if (s[i] < '0' || s[i] > '9') return false;
    auto r = std::from_chars(s.data() + pos, s.data() + pos + len, out);
    return r.ec == std::errc{};
}

// Sunday on or before the last day of the month, as days since epoch.
std::int64_t last_sunday(int year, int month) {
    chr::year_month_weekday_last ymwl{chr::year{year} / month / chr::Sunday[chr::last]};
    return chr::sys_days{ymwl}.time_since_epoch().count();
}

}  // namespace

std::int64_t days_from_civil(CivilDate d) {
    chr::year_month_day ymd{chr::year{d.year}, chr::month{static_cast<unsigned>(d.month)},
                            chr::day{static_cast<unsigned>(d.day)}};
    return chr::sys_days{ymd}.time_since_epoch().count();
}

CivilDate civil_from_days(std::int64_t days) {
    chr::year_month_day ymd{chr::sys_days{chr::days{days}}};
    return {static_cast<int>(ymd.year()), static_cast<int>(static_cast<unsigned>(ymd.month())),
            static_cast<int>(static_cast<unsigned>(ymd.day()))};
}

int day_of_year(CivilDate d) {
    return static_cast<int>(days_from_civil(d) - days_from_civil({d.year, 1, 1})) + 1;
}

std::string format_date(CivilDate d) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", d.year, d.month, d.day);
    return buf;
}

std::optional<CivilDate> parse_date(std::string_view s) {
    CivilDate d;
    if (s.size() != 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
    if (!read_int(s, 0, 4, d.year) || !read_int(s, 5, 2, d.month) || !read_int(s, 8, 2, d.day))
        return std::nullopt;
    chr::year_month_day ymd{chr::year{d.year}, chr::month{static_cast<unsigned>(d.month)},
                            chr::day{static_cast<unsigned>(d.day)}};
    if (!ymd.ok()) return std::nullopt;
    return d;
}

std::optional<UnixSeconds> parse_iso_utc(std::string_view s) {
    if (s.size() < 16) return std::nullopt;
    auto date = parse_date(s.substr(0, 10));
    if (!date) return std::nullopt;
    if (s[10] != 'T' && s[10] != ' ') return std::nullopt;
    int hh = 0, mm = 0, ss = 0;
    if (!read_int(s, 11, 2, hh) || s[13] != ':' || !read_int(s, 14, 2, mm)) return std::nullopt;
    std::size_t pos = 16;
    if (pos < s.size() && s[pos] == ':') {
        if (!read_int(s, pos + 1, 2, ss)) return std::nullopt;
        pos += 3;
        // Fractional seconds are truncated.
        if (pos < s.size() && s[pos] == '.') {
            ++pos;
            while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') ++pos;
        }
    }
    std::string_view tail = s.substr(pos);
    if (!(tail.empty() || tail == "Z" || tail == "+00:00" || tail == "+0000")) return std::nullopt;
    if (hh > 23 || mm > 59 || ss > 60) return std::nullopt;
    return days_from_civil(*date) * kDay + hh * 3600 + mm * 60 + ss;
}

std::string format_iso_utc(UnixSeconds t) {
    const std::int64_t days = floor_div(t, kDay);
    const std::int64_t sec = t - days * kDay;
    CivilDate d = civil_from_days(days);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02dZ", d.year, d.month, d.day,
                  static_cast<int>(sec / 3600), static_cast<int>(sec / 60 % 60),
                  static_cast<int>(sec % 60));
    return buf;
}

std::string format_hhmm(double hour) {
    long minutes = std::lround(hour * 60.0);
    minutes = ((minutes % 1440) + 1440) % 1440;
    char buf[8];
    std::snprintf(buf, sizeof buf, "%02ld:%02ld", minutes / 60, minutes % 60);
    return buf;
}

TzRule TzRule::fixed(int offset_minutes) {
    TzRule r;
    r.standard_minutes_ = offset_minutes;
    r.dst_ = false;
    char buf[24];
    std::snprintf(buf, sizeof buf, "UTC%+d:%02d", offset_minutes / 60, std::abs(offset_minutes % 60));
    r.id_ = offset_minutes == 0 ? "UTC" : buf;
    return r;
}

TzRule TzRule::eu(int standard_offset_minutes) {
    TzRule r;
    r.standard_minutes_ = standard_offset_minutes;
    r.dst_ = true;
    r.id_ = standard_offset_minutes == 60 ? "CET" : "EU" + std::to_string(standard_offset_minutes);
    return r;
}

TzRule TzRule::parse(std::string_view id) {
    if (id == "UTC" || id == "Z" || id == "GMT") return fixed(0);
    if (id == "CET" || id == "CET/CEST" || id == "Europe/Rome" || id == "Europe/Berlin")
        return eu(60);
    if (id == "WET" || id == "Europe/London" || id == "Europe/Lisbon") return eu(0);
    if (id == "EET" || id == "Europe/Athens") return eu(120);
    auto parse_hours = [](std::string_view v) -> std::optional<int> {
        if (v.empty() || (v[0] != '+' && v[0] != '-')) return std::nullopt;
        int sign = v[0] == '-' ? -1 : 1;
        int h = 0, m = 0;
        auto colon = v.find(':');
        std::string_view hs = v.substr(1, colon == std::string_view::npos ? v.npos : colon - 1);
        if (std::from_chars(hs.data(), hs.data() + hs.size(), h).ec != std::errc{}) return std::nullopt;
        if (colon != std::string_view::npos) {
            std::string_view ms = v.substr(colon + 1);
            if (std::from_chars(ms.data(), ms.data() + ms.size(), m).ec != std::errc{})
                return std::nullopt;
        }
        if (h > 14 || m > 59) return std::nullopt;
        return sign * (h * 60 + m);
    };
    if (id.starts_with("UTC")) {
        if (auto m = parse_hours(id.substr(3))) return fixed(*m);
    }
    if (id.starts_with("EU:")) {
        if (auto m = parse_hours(id.substr(3))) return eu(*m);
    }
    throw std::invalid_argument("unknown timezone rule: " + std::string(id));
}

UnixSeconds TzRule::dst_start(int year) const {
    return last_sunday(year, 3) * kDay + 3600;
}

UnixSeconds TzRule::dst_end(int year) const {
    return last_sunday(year, 10) * kDay + 3600;
}

int TzRule::offset_minutes(UnixSeconds utc) const {
    if (!dst_) return standard_minutes_;
    const int year = civil_from_days(floor_div(utc, kDay)).year;
    const bool summer = utc >= dst_start(year) && utc < dst_end(year);
    return standard_minutes_ + (summer ? 60 : 0);
}

bool TzRule::in_spring_gap(UnixSeconds utc) const {
    if (!dst_) return false;
    const UnixSeconds s = dst_start(civil_from_days(floor_div(utc, kDay)).year);
    return utc >= s && utc < s + 3600;
}

bool TzRule::in_autumn_overlap(UnixSeconds utc) const {
    if (!dst_) return false;
    const UnixSeconds e = dst_end(civil_from_days(floor_div(utc, kDay)).year);
    return utc >= e && utc < e + 3600;
}

LocalTime to_local(UnixSeconds utc, const TzRule& rule) {
    const UnixSeconds local = utc + static_cast<UnixSeconds>(rule.offset_minutes(utc)) * 60;
    LocalTime lt;
    lt.day = floor_div(local, kDay);
    lt.second = static_cast<std::int32_t>(local - lt.day * kDay);
    lt.dst_gap = rule.in_spring_gap(utc);
    lt.dst_overlap = rule.in_autumn_overlap(utc);
    return lt;
}

}  // namespace diurnal
