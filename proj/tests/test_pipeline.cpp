#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "diurnal/config.hpp"
#include "diurnal/kernels.hpp"
#include "diurnal/pipeline.hpp"
#include "diurnal/report.hpp"

using namespace diurnal;
namespace fs = std::filesystem;

namespace {

RunConfig small_config() {
    RunConfig c;
    c.synth = "preset:nocturnal:20:260:300:15";
    c.span_first = {2021, 1, 1};
    c.span_end = {2021, 7, 1};
    c.lockdown = {{2021, 3, 1}, {2021, 3, 31}};
    c.dip_bootstrap = 100;
    c.dip_sample = 200;
    return c;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

fs::path scratch(const std::string& name) {
    auto p = fs::temp_directory_path() / ("diurnal_test_" + name);
    fs::remove_all(p);
    return p;
}

}  // namespace

TEST_CASE("config keys, hashing and parsing") {
    RunConfig a;
    RunConfig b = a;
    b.set("threads", "4");
    b.set("output_dir", "elsewhere");
    b.set("plots", "false");
    CHECK(a.hash() == b.hash());
    b.set("seed", "2");
    CHECK(a.hash() != b.hash());
    CHECK(a.hash().size() == 16);
    CHECK_THROWS_AS(a.set("no_such_key", "1"), InputError);
    CHECK_THROWS_AS(a.set("threshold", "many"), InputError);
    CHECK_THROWS_AS(a.set("span_first", "2021-13-01"), InputError);

    std::istringstream in("# comment\n[analysis]\nthreshold = 100\ntz = \"UTC\"\nk_max=6 # trailing\n");
    const auto c = read_config(in);
    CHECK(c.threshold == 100);
    CHECK(c.tz == "UTC");
    CHECK(c.k_max == 6);
    CHECK(c.canonical().find("threshold = 100") != std::string::npos);
}

TEST_CASE("pipeline on a small planted corpus") {
    const auto cfg = small_config();
    const auto input = load_input(cfg);
    CHECK(input.posts.localized());
    CHECK(input.truth_users.size() == 75);
    const auto bundle = analyze(cfg, input);
    CHECK(bundle.config_hash == cfg.hash());
    REQUIRE(bundle.groups.size() >= 2);
    CHECK(bundle.groups.back().infrequent);
    CHECK(bundle.model.infrequent.size() == 15);
    REQUIRE(bundle.ground_truth_ari.has_value());
    CHECK(*bundle.ground_truth_ari > 0.8);
    for (const auto& g : bundle.groups) {
        CHECK(g.raw.mass() == doctest::Approx(1.0));
        CHECK(g.heatmap.months.size() == 6);
        CHECK(g.heatmap.rows.size() == 6);
        CHECK(g.day_night.size() == 3);
        CHECK(g.budget.m >= cfg.m_min);
        CHECK(g.budget.m <= cfg.m_max);
        CHECK(g.wake.bin_count() == 64);
    }
    CHECK(bundle.clock_boundaries.sunrise > 5.0);
    CHECK(bundle.clock_boundaries.sunset < 21.0);
    CHECK(std::fmod(bundle.clock_boundaries.sunrise * 4.0, 1.0) == 0.0);
}

TEST_CASE("pipeline output does not depend on the thread count") {
    const auto cfg = small_config();
    const auto input = load_input(cfg);
    kernels::set_threads(1);
    const auto one = to_json(analyze(cfg, input)).dump();
    kernels::set_threads(3);
    const auto three = to_json(analyze(cfg, input)).dump();
    kernels::set_threads(0);
    CHECK(one == three);
    const auto again = to_json(analyze(cfg, input)).dump();
    CHECK(one == again);
}

TEST_CASE("report files carry the config hash and plots regenerate identically") {
    auto cfg = small_config();
    const auto bundle = run_pipeline(cfg);
    const auto dir = scratch("report");
    const auto files = emit_report(bundle, dir, true);
    REQUIRE_FALSE(files.empty());
    const std::string tag = bundle.config_hash;
    std::size_t svgs = 0;
    for (const auto& f : files) {
        REQUIRE(fs::exists(f));
        const auto text = slurp(f);
        CHECK_MESSAGE(text.find(tag) != std::string::npos, f.string());
        if (f.extension() == ".csv") CHECK(text.rfind("# config_hash=" + tag + "\n", 0) == 0);
        if (f.extension() == ".svg") ++svgs;
    }
    CHECK(svgs >= 3);
    CHECK(fs::exists(dir / "bundle.json"));
    CHECK(fs::exists(dir / "assignments.csv"));
    CHECK(fs::exists(dir / "day_night.csv"));

    const auto json = nlohmann::json::parse(slurp(dir / "bundle.json"));
    CHECK(json["config_hash"] == tag);
    const auto again = scratch("replot");
    const auto replots = render_plots(json, again);
    for (const auto& p : replots) CHECK(slurp(p) == slurp(dir / p.filename()));
    fs::remove_all(dir);
    fs::remove_all(again);
}

TEST_CASE("only infrequent users is a warning, or an error when strict") {
    auto cfg = small_config();
    cfg.threshold = 100000;
    const auto input = load_input(cfg);
    const auto bundle = analyze(cfg, input);
    CHECK_FALSE(bundle.warnings.empty());
    REQUIRE(bundle.groups.size() == 1);
    CHECK(bundle.groups[0].infrequent);
}

TEST_CASE("input errors name their stage") {
    RunConfig cfg;
    cfg.posts = "/nonexistent/posts.csv";
    try {
        (void)run_pipeline(cfg);
        FAIL("expected an input error");
    } catch (const InputError& e) {
        CHECK(std::string(e.what()).rfind("[ingest]", 0) == 0);
    }
    RunConfig none;
    CHECK_THROWS_AS(run_pipeline(none), InputError);
}
