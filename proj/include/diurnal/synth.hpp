#pragma once

#include <array>
#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "diurnal/ingest.hpp"
#include "diurnal/ratios.hpp"

namespace diurnal::synth {

/// One von Mises component of a population's time-of-day mixture.
struct Component {
    double peak_hour = 12.0;
    double concentration = 4.0;  // kappa on the 24 h circle
    double weight = 1.0;
};

/// Multiplies the propensity of `categories` inside [start_hour, end_hour).
struct Surge {
    double start_hour = 0.0;
    double end_hour = 0.0;
    CategorySet categories = CategorySet::disinformative();
    double multiplier = 2.0;
};

struct Population {
    std::string name;
    std::size_t size = 1;
    std::size_t posts_min = 300;
    std::size_t posts_max = 400;
    std::vector<Component> mixture;
    /// Base probabilities over all eight categories, in enum order.
    std::array<double, kCategoryCount> propensity{};
    std::vector<Surge> surges;
    /// Relative posting intensity on lockdown days.
    double lockdown_multiplier = 1.0;
};

struct SynthSpec {
    std::vector<Population> populations;
    CivilDate first_day{2020, 1, 22};
    CivilDate end_day{2022, 8, 1};  // exclusive
    ratios::DateRange lockdown = ratios::kItalianLockdown;
    std::string tz = "CET";

    /// Throws std::invalid_argument describing the first problem found.
    void validate() const;
};

struct SynthOutput {
    PostTable posts;                      // not yet localized
    std::vector<std::string> users;       // generated user ids
    std::vector<std::size_t> population;  // ground truth, parallel to users
};

/// Deterministic in (spec, seed). Each user draws from its own substream.
SynthOutput generate(const SynthSpec& spec, std::uint64_t seed);

/// JSON form, e.g.
/// {"populations":[{"name":"morning","size":300,"posts":[300,400],
///   "mixture":[{"peak":9.25,"kappa":4,"weight":1}],
///   "propensity":{"science":0.2,...},
///   "surges":[{"start":2.5,"end":4.25,"categories":"disinformative","multiplier":2}],
///   "lockdown_multiplier":1.2}], "first_day":"2020-01-22", "end_day":"2022-08-01", "tz":"CET"}
SynthSpec parse_spec(std::istream& in);
void write_spec(std::ostream& out, const SynthSpec& spec);

/// Default category mix used by the presets.
std::array<double, kCategoryCount> default_propensity();

/// Morning (09:15), intermediate (12:00) and evening (22:15) chronotypes,
/// `users_each` frequent users apiece with `posts_min`..`posts_max` posts.
SynthSpec chronotype_spec(std::size_t users_each = 300, std::size_t posts_min = 300, std::size_t posts_max = 400);

/// The three chronotypes plus an infrequent population, all with the
/// disinformative propensity doubled between 02:30 and 04:15.
SynthSpec nocturnal_surge_spec(std::size_t users_each, std::size_t posts_min, std::size_t posts_max,
                               std::size_t infrequent_users);

void write_truth_csv(std::ostream& out, const SynthOutput& out_data, const SynthSpec& spec);

}  // namespace diurnal::synth
