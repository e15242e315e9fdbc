#include "diurnal/solar.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "diurnal/common.hpp"

namespace diurnal::solar {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;
constexpr double kZenith = 90.833;

bool is_leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

struct Geometry {
    double eqtime;  // minutes
    double decl;    // radians
};

Geometry geometry(CivilDate date, double utc_minutes) {
    const double days_in_year = is_leap(date.year) ? 366.0 : 365.0;
    const double g = 2.0 * std::numbers::pi / days_in_year *
                     (day_of_year(date) - 1 + (utc_minutes / 60.0 - 12.0) / 24.0);
    const double eqtime = 229.18 * (0.000075 + 0.001868 * std::cos(g) - 0.032077 * std::sin(g) -
                                    0.014615 * std::cos(2 * g) - 0.040849 * std::sin(2 * g));
    const double decl = 0.006918 - 0.399912 * std::cos(g) + 0.070257 * std::sin(g) - 0.006758 * std::cos(2 * g) +
                        0.000907 * std::sin(2 * g) - 0.002697 * std::cos(3 * g) + 0.00148 * std::sin(3 * g);
    return {eqtime, decl};
}

// Hour angle in degrees at the horizon crossing, or nullopt with a flag.
std::optional<double> hour_angle(double lat, double decl, SunFlag& flag) {
    const double phi = lat * kDeg;
    const double c = std::cos(kZenith * kDeg) / (std::cos(phi) * std::cos(decl)) - std::tan(phi) * std::tan(decl);
    if (c > 1.0) {
        flag = SunFlag::PolarNight;
        return std::nullopt;
    }
    if (c < -1.0) {
        flag = SunFlag::PolarDay;
        return std::nullopt;
    }
    flag = SunFlag::Normal;
    return std::acos(c) / kDeg;
}

void check_coordinates(double lat, double lon) {
    if (!(std::abs(lat) <= 90.0) || !(std::abs(lon) <= 180.0))
        throw std::invalid_argument("coordinates out of range");
}

}  // namespace

std::string_view to_string(SunFlag f) {
    switch (f) {
        case SunFlag::Normal: return "normal";
        case SunFlag::PolarDay: return "polar_day";
        case SunFlag::PolarNight: return "polar_night";
    }
    return "normal";
}

std::optional<double> SunTimes::day_length() const {
    if (flag == SunFlag::PolarDay) return 24.0;
    if (flag == SunFlag::PolarNight) return 0.0;
    double d = *sunset - *sunrise;
    if (d < 0.0) d += 24.0;
    return d;
}

UtcEvents utc_events(double lat, double lon, CivilDate date) {
    check_coordinates(lat, lon);
    UtcEvents ev;
    // Start from solar noon and refine each event with the geometry at its own time.
    const auto noon = geometry(date, 720.0 - 4.0 * lon);
    SunFlag flag = SunFlag::Normal;
    auto ha = hour_angle(lat, noon.decl, flag);
    if (!ha) {
        ev.flag = flag;
        return ev;
    }
    double rise = 720.0 - 4.0 * (lon + *ha) - noon.eqtime;
    double set = 720.0 - 4.0 * (lon - *ha) - noon.eqtime;
    for (int iter = 0; iter < 2; ++iter) {
        const auto gr = geometry(date, rise);
        const auto gs = geometry(date, set);
        SunFlag fr = SunFlag::Normal, fs = SunFlag::Normal;
        const auto har = hour_angle(lat, gr.decl, fr);
        const auto has = hour_angle(lat, gs.decl, fs);
        if (!har || !has) break;
        rise = 720.0 - 4.0 * (lon + *har) - gr.eqtime;
        set = 720.0 - 4.0 * (lon - *has) - gs.eqtime;
    }
    ev.sunrise_minutes = rise;
    ev.sunset_minutes = set;
    return ev;
}

SunTimes sun_times(double lat, double lon, CivilDate date, const TzRule& tz) {
    SunTimes st;
    st.date = date;
    st.lat = lat;
    st.lon = lon;
    const auto ev = utc_events(lat, lon, date);
    st.flag = ev.flag;
    if (ev.flag != SunFlag::Normal) return st;
    const UnixSeconds midnight = days_from_civil(date) * 86400;
    auto local_hour = [&](double minutes) {
        const UnixSeconds instant = midnight + static_cast<UnixSeconds>(std::floor(minutes * 60.0));
        double h = (minutes + tz.offset_minutes(instant)) / 60.0;
        h = std::fmod(h, 24.0);
        if (h < 0.0) h += 24.0;
        return h;
    };
    st.sunrise = local_hour(ev.sunrise_minutes);
    st.sunset = local_hour(ev.sunset_minutes);
    return st;
}

double round_quarter_hour(double hour) {
    const double q = std::floor(hour * 4.0 + 0.5) / 4.0;
    return q >= 24.0 ? q - 24.0 : q;
}

Boundaries monthly_boundaries(double lat, double lon, CivilDate month, const TzRule& tz) {
    const auto st = sun_times(lat, lon, {month.year, month.month, 1}, tz);
    if (st.flag != SunFlag::Normal)
        throw DegenerateData("no sunrise/sunset on " + format_date(st.date) + " (" + std::string(to_string(st.flag)) +
                             ")");
    return {round_quarter_hour(*st.sunrise), round_quarter_hour(*st.sunset)};
}

std::vector<CivilDate> months_between(CivilDate first, CivilDate last) {
    std::vector<CivilDate> out;
    CivilDate m{first.year, first.month, 1};
    const CivilDate end{last.year, last.month, 1};
    while (m <= end) {
        out.push_back(m);
        if (++m.month > 12) {
            m.month = 1;
            ++m.year;
        }
    }
    return out;
}

Boundaries average_boundaries(double lat, double lon, CivilDate first, CivilDate last, const TzRule& tz) {
    const auto months = months_between(first, last);
    if (months.empty()) throw std::invalid_argument("empty month range");
    double rise = 0.0, set = 0.0;
    for (const auto& m : months) {
        const auto st = sun_times(lat, lon, m, tz);
        if (st.flag != SunFlag::Normal)
            throw DegenerateData("no sunrise/sunset on " + format_date(m) + " (" + std::string(to_string(st.flag)) +
                                 ")");
        rise += *st.sunrise;
        set += *st.sunset;
    }
    const double n = static_cast<double>(months.size());
    return {round_quarter_hour(rise / n), round_quarter_hour(set / n)};
}

void write_sun_times_csv(std::ostream& out, std::span<const SunTimes> rows) {
    out << "date,lat,lon,sunrise,sunset,flag\n";
    for (const auto& r : rows) {
        out << format_date(r.date) << ',' << format_number(r.lat) << ',' << format_number(r.lon) << ','
            << (r.sunrise ? format_number(*r.sunrise) : "") << ',' << (r.sunset ? format_number(*r.sunset) : "")
            << ',' << to_string(r.flag) << '\n';
    }
}

}  // namespace diurnal::solar
