#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string_view>
#include <vector>

#include "diurnal/timeutil.hpp"

namespace diurnal::solar {

enum class SunFlag : std::uint8_t { Normal, PolarDay, PolarNight };

std::string_view to_string(SunFlag f);

struct SunTimes {
    CivilDate date;
    double lat = 0.0;
    double lon = 0.0;
    /// Local wall-clock hours; absent unless the flag is Normal.
    std::optional<double> sunrise;
    std::optional<double> sunset;
    SunFlag flag = SunFlag::Normal;

    std::optional<double> day_length() const;
};

/// Sunrise and sunset in UTC minutes after midnight of `date`, from the
/// NOAA fractional-year approximations with the sun's upper limb at a
/// zenith of 90.833 degrees. Values may fall outside [0, 1440) far from
/// Greenwich.
struct UtcEvents {
    double sunrise_minutes = 0.0;
    double sunset_minutes = 0.0;
    SunFlag flag = SunFlag::Normal;
};
UtcEvents utc_events(double lat, double lon, CivilDate date);

/// Sunrise/sunset converted to wall-clock hours with `tz`.
SunTimes sun_times(double lat, double lon, CivilDate date, const TzRule& tz);

/// Rounds an hour of day to the nearest quarter hour (half a step rounds up).
double round_quarter_hour(double hour);

struct Boundaries {
    double sunrise = 0.0;
    double sunset = 0.0;
};

/// Sun times on the first day of `month` (day field ignored), rounded to
/// the nearest quarter hour. Throws DegenerateData on polar flags.
Boundaries monthly_boundaries(double lat, double lon, CivilDate month, const TzRule& tz);

/// First-of-month sun times averaged over every month in [first, last]
/// (day fields ignored), then rounded to the nearest quarter hour.
Boundaries average_boundaries(double lat, double lon, CivilDate first, CivilDate last, const TzRule& tz);

/// First day of each month touched by [first, last].
std::vector<CivilDate> months_between(CivilDate first, CivilDate last);

void write_sun_times_csv(std::ostream& out, std::span<const SunTimes> rows);

}  // namespace diurnal::solar
