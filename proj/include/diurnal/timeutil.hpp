#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace diurnal {

/// Seconds since 1970-01-01T00:00:00Z.
using UnixSeconds = std::int64_t;

struct CivilDate {
    int year = 1970;
    int month = 1;
    int day = 1;

    friend bool operator==(const CivilDate&, const CivilDate&) = default;
    friend auto operator<=>(const CivilDate&, const CivilDate&) = default;
};

/// Days since 1970-01-01 for a proleptic Gregorian date.
std::int64_t days_from_civil(CivilDate d);
CivilDate civil_from_days(std::int64_t days);
int day_of_year(CivilDate d);
std::string format_date(CivilDate d);

/// Parses `YYYY-MM-DD`.
std::optional<CivilDate> parse_date(std::string_view s);

/// Parses ISO-8601 UTC instants: `YYYY-MM-DDTHH:MM[:SS][Z]`, `T` or space
/// separator, optional `+00:00`. Any other offset is rejected.
std::optional<UnixSeconds> parse_iso_utc(std::string_view s);
std::string format_iso_utc(UnixSeconds t);

/// Formats an hour-of-day as `HH:MM`.
std::string format_hhmm(double hour);

/// A UTC-offset rule: either a fixed offset or the EU daylight-saving
/// schedule (last Sunday of March 01:00 UTC to last Sunday of October
/// 01:00 UTC) on top of a standard offset.
class TzRule {
public:
    /// Accepts `UTC`, `CET` (Central European with EU DST; alias
    /// `Europe/Rome`, `CET/CEST`), `EU:+H` and fixed `UTC+H` / `UTC-H`.
    static TzRule parse(std::string_view id);
    static TzRule fixed(int offset_minutes);
    static TzRule eu(int standard_offset_minutes);

    const std::string& id() const { return id_; }

    /// Offset applied to a UTC instant.
    int offset_minutes(UnixSeconds utc) const;

    /// True when `utc` falls in the first hour after the spring transition:
    /// the pre-transition offset would put it in the skipped wall-clock hour.
    bool in_spring_gap(UnixSeconds utc) const;
    /// True for the repeated wall-clock hour after the autumn transition.
    bool in_autumn_overlap(UnixSeconds utc) const;

    /// UTC instant at which DST begins/ends in a given year (EU rule only).
    UnixSeconds dst_start(int year) const;
    UnixSeconds dst_end(int year) const;

    bool has_dst() const { return dst_; }

private:
    std::string id_ = "UTC";
    int standard_minutes_ = 0;
    bool dst_ = false;
};

/// A UTC instant expressed in local wall-clock terms.
struct LocalTime {
    std::int64_t day = 0;        // local days since epoch
    std::int32_t second = 0;     // local seconds of day in [0, 86400)
    bool dst_gap = false;
    bool dst_overlap = false;
};

LocalTime to_local(UnixSeconds utc, const TzRule& rule);

}  // namespace diurnal
