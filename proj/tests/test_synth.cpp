#include <doctest.h>

#include <sstream>

#include "diurnal/activity.hpp"
#include "diurnal/synth.hpp"

using namespace diurnal;
using namespace diurnal::synth;

namespace {

SynthSpec single(double peak, double kappa, std::size_t posts) {
    SynthSpec s;
    s.first_day = {2021, 1, 1};
    s.end_day = {2022, 1, 1};
    s.lockdown = {{2021, 3, 1}, {2021, 3, 31}};
    Population p;
    p.name = "solo";
    p.size = 4;
    p.posts_min = posts;
    p.posts_max = posts;
    p.mixture = {{peak, kappa, 1.0}};
    p.propensity = default_propensity();
    s.populations.push_back(p);
    return s;
}

std::array<double, kCategoryCount> category_share(const PostTable& t) {
    std::array<double, kCategoryCount> c{};
    for (std::size_t r = 0; r < t.size(); ++r) c[static_cast<std::size_t>(*t.category(r))] += 1.0;
    for (auto& v : c) v /= static_cast<double>(t.size());
    return c;
}

}  // namespace

TEST_CASE("generation is deterministic in the seed") {
    const auto spec = chronotype_spec(5, 50, 60);
    const auto a = generate(spec, 3);
    const auto b = generate(spec, 3);
    const auto c = generate(spec, 4);
    REQUIRE(a.posts.size() == b.posts.size());
    for (std::size_t r = 0; r < a.posts.size(); ++r) {
        CHECK(a.posts.timestamp(r) == b.posts.timestamp(r));
        CHECK(a.posts.category(r) == b.posts.category(r));
    }
    CHECK(a.users == b.users);
    bool differs = a.posts.size() != c.posts.size();
    for (std::size_t r = 0; !differs && r < a.posts.size(); ++r) differs = a.posts.timestamp(r) != c.posts.timestamp(r);
    CHECK(differs);
}

TEST_CASE("users, sizes and ground truth") {
    const auto spec = chronotype_spec(6, 40, 50);
    const auto out = generate(spec, 1);
    CHECK(out.users.size() == 18);
    CHECK(out.population.size() == 18);
    CHECK(out.users.front() == "morning_00000");
    for (std::size_t u = 0; u < out.posts.user_count(); ++u) {
        CHECK(out.posts.user_post_count(u) >= 35);
        CHECK(out.posts.user_post_count(u) <= 50);
    }
    for (std::size_t r = 0; r < out.posts.size(); ++r) CHECK(out.posts.span().contains(out.posts.timestamp(r)));
    std::ostringstream os;
    write_truth_csv(os, out, spec);
    CHECK(os.str().find("morning_00000,morning") != std::string::npos);
}

TEST_CASE("the activity peak lands at the planted hour") {
    for (double peak : {3.0, 9.25, 21.5}) {
        const auto out = generate(single(peak, 4.0, 3000), 11);
        const auto local = localize(out.posts, TzRule::parse("CET"));
        std::vector<std::size_t> all(local.user_count());
        for (std::size_t u = 0; u < all.size(); ++u) all[u] = u;
        const auto curve = gaussian_circular_smooth(cluster_activity_curve(local, all));
        const auto& v = curve.values();
        const auto b = static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
        double d = std::abs(bin_start_hour(b) + 0.125 - peak);
        d = std::min(d, 24.0 - d);
        CHECK_MESSAGE(d < 1.0, "peak " << peak << " found at " << bin_start_hour(b));
    }
}

TEST_CASE("category frequencies follow the propensities") {
    const auto out = generate(single(12.0, 1.0, 5000), 12);
    const auto share = category_share(out.posts);
    const auto want = default_propensity();
    for (std::size_t c = 0; c < kCategoryCount; ++c) CHECK(share[c] == doctest::Approx(want[c]).epsilon(0.1));
}

TEST_CASE("surges raise the surged categories inside their window") {
    auto spec = single(12.0, 0.0, 5000);
    spec.populations[0].surges = {{2.5, 4.25, CategorySet::disinformative(), 3.0}};
    const auto out = generate(spec, 13);
    const auto local = localize(out.posts, TzRule::parse(spec.tz));
    double in = 0.0, in_h = 0.0, out_n = 0.0, out_h = 0.0;
    for (std::size_t r = 0; r < local.size(); ++r) {
        const bool h = is_disinformative(*local.category(r));
        const double hour = local.local_second(r) / 3600.0;
        if (hour >= 2.5 && hour < 4.25) {
            in += 1.0;
            in_h += h;
        } else {
            out_n += 1.0;
            out_h += h;
        }
    }
    CHECK(in_h / in > 1.5 * (out_h / out_n));
}

TEST_CASE("lockdown days carry more posts") {
    auto spec = single(12.0, 1.0, 3000);
    spec.populations[0].lockdown_multiplier = 3.0;
    const auto out = generate(spec, 14);
    const auto lo = days_from_civil(spec.lockdown.first), hi = days_from_civil(spec.lockdown.last);
    double in = 0.0, total = static_cast<double>(out.posts.size());
    for (std::size_t r = 0; r < out.posts.size(); ++r) {
        const auto day = out.posts.timestamp(r) / 86400;
        if (day >= lo && day <= hi) in += 1.0;
    }
    const double in_days = static_cast<double>(hi - lo + 1), all_days = 365.0;
    const double rate_in = in / in_days, rate_out = (total - in) / (all_days - in_days);
    CHECK(rate_in / rate_out == doctest::Approx(3.0).epsilon(0.15));
}

TEST_CASE("invalid specs are rejected") {
    auto s = single(12.0, 1.0, 10);
    s.populations[0].propensity[0] += 0.5;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s = single(12.0, 1.0, 10);
    s.populations[0].propensity[0] = -0.1;
    s.populations[0].propensity[1] += 0.2;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s = single(12.0, 1.0, 10);
    s.populations[0].posts_min = 20;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s = single(12.0, 1.0, 10);
    s.populations[0].mixture.clear();
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s = single(12.0, 1.0, 10);
    s.populations.clear();
    CHECK_THROWS_AS(generate(s, 1), std::invalid_argument);
}

TEST_CASE("spec JSON round trip") {
    const auto spec = nocturnal_surge_spec(10, 300, 320, 20);
    std::ostringstream a;
    write_spec(a, spec);
    std::istringstream in(a.str());
    const auto back = parse_spec(in);
    std::ostringstream b;
    write_spec(b, back);
    CHECK(a.str() == b.str());
    CHECK(back.populations.size() == 4);

    std::istringstream bad(R"({"populations":[{"name":"x","propensity":{"bogus":1}}]})");
    CHECK_THROWS_AS(parse_spec(bad), InputError);
    std::istringstream junk("not json");
    CHECK_THROWS_AS(parse_spec(junk), InputError);
}
