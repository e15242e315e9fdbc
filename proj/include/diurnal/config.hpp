#pragma once

#include <cstdint>
#include <istream>
#include <string>
#include <string_view>

#include "diurnal/ratios.hpp"
#include "diurnal/timeutil.hpp"

namespace diurnal {

/// Every knob of a run. Defaults are the values used in the study.
struct RunConfig {
    // inputs
    std::string posts;
    std::string category_map;
    std::string bot_list;
    std::string coordinates;
    /// Synthetic input instead of `posts`: a spec file or `preset:chronotypes`
    /// / `preset:nocturnal`.
    std::string synth;

    CivilDate span_first{2020, 1, 22};
    CivilDate span_end{2022, 8, 1};  // exclusive
    std::string tz = "CET";
    double smoothing_minutes = 90.0;
    std::size_t threshold = 240;
    std::size_t k_max = 10;
    std::size_t m_min = 1;
    std::size_t m_max = 4;
    double wake_hours = 16.0;
    double margin_hours = 1.0;
    ratios::DateRange lockdown = ratios::kItalianLockdown;
    std::uint64_t seed = 1;
    std::size_t dip_bootstrap = 2000;
    std::size_t dip_sample = 1000;
    std::size_t extrema = 3;
    double centroid_lat = 42.5;
    double centroid_lon = 12.5;

    // execution; not part of the provenance hash
    std::string output_dir = "out";
    int threads = 0;
    bool strict = false;
    bool plots = true;

    /// Sets one `key = value` pair; throws InputError on unknown keys or
    /// unparsable values.
    void set(std::string_view key, std::string_view value);
    /// Result-affecting settings as sorted `key = value` lines.
    std::string canonical() const;
    /// 16 hex digits of the FNV-1a hash of canonical().
    std::string hash() const;
};

/// Reads `key = value` lines; `#` starts a comment, `[section]` headers are
/// ignored and values may be double-quoted.
RunConfig read_config(std::istream& in, RunConfig base = {});

}  // namespace diurnal
