#include <filesystem>
#include <functional>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "diurnal/clustering.hpp"
#include "diurnal/common.hpp"
#include "diurnal/config.hpp"
#include "diurnal/pipeline.hpp"
#include "diurnal/report.hpp"
#include "diurnal/synth.hpp"

namespace {

using namespace diurnal;

struct Common {
    std::string config_path;
    std::vector<std::string> sets;
    std::uint64_t seed = 0;
    bool seed_given = false;
    int threads = 0;
    bool strict = false;
    std::string out;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--config", c.config_path, "key = value configuration file");
    cmd->add_option("--set", c.sets, "override a configuration key (key=value)");
    cmd->add_option("--seed", c.seed, "random seed");
    cmd->add_option("--threads", c.threads, "worker threads (0 = default)");
    cmd->add_flag("--strict", c.strict, "treat degenerate data as an error");
    cmd->add_option("--out", c.out, "output path");
}

RunConfig make_config(const Common& c, CLI::App* cmd) {
    RunConfig cfg;
    if (!c.config_path.empty()) {
        std::ifstream in(c.config_path);
        if (!in) throw InputError("cannot open config '" + c.config_path + "'");
        cfg = read_config(in);
    }
    for (const auto& s : c.sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw InputError("--set expects key=value, got '" + s + "'");
        cfg.set(s.substr(0, eq), s.substr(eq + 1));
    }
    if (cmd->count("--seed")) cfg.seed = c.seed;
    if (cmd->count("--threads")) cfg.threads = c.threads;
    if (c.strict) cfg.strict = true;
    if (!c.out.empty()) cfg.output_dir = c.out;
    return cfg;
}

void print_warnings(const ReportBundle& b) {
    for (const auto& w : b.warnings) std::cerr << "warning: " << w << '\n';
}

int run_guarded(const std::function<void()>& f) {
    try {
        f();
        return 0;
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return 2;
    } catch (const DegenerateData& e) {
        std::cerr << "degenerate data: " << e.what() << '\n';
        return 3;
    } catch (const InvariantViolation& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 4;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid argument: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 4;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Diurnal activity and content-ratio analysis of social media posts"};
    app.require_subcommand(1);

    Common ingest_c, synth_c, cluster_c, analyze_c, run_c;
    std::string report_bundle, report_out = "out";
    std::string synth_spec, synth_preset = "nocturnal", synth_truth;

    auto* ingest = app.add_subcommand("ingest", "parse, map, filter and write canonical posts");
    add_common(ingest, ingest_c);
    auto* synth = app.add_subcommand("synth", "generate a synthetic corpus");
    add_common(synth, synth_c);
    synth->add_option("--spec", synth_spec, "JSON population spec");
    synth->add_option("--preset", synth_preset, "chronotypes | nocturnal (optionally :users:min:max[:infrequent])");
    synth->add_option("--truth", synth_truth, "write ground-truth labels to this CSV");
    auto* cluster = app.add_subcommand("cluster", "cluster frequent users and score k");
    add_common(cluster, cluster_c);
    auto* analyze = app.add_subcommand("analyze", "full analysis, CSV and JSON output");
    add_common(analyze, analyze_c);
    auto* report = app.add_subcommand("report", "render SVG plots from bundle.json");
    report->add_option("--bundle", report_bundle, "bundle.json from analyze/run")->required();
    report->add_option("--out", report_out, "output directory");
    auto* run = app.add_subcommand("run", "full pipeline with plots");
    add_common(run, run_c);

    CLI11_PARSE(app, argc, argv);

    if (*ingest) {
        return run_guarded([&] {
            auto cfg = make_config(ingest_c, ingest);
            const auto in = load_input(cfg);
            const std::string path = ingest_c.out.empty() ? "posts.tsv" : ingest_c.out;
            std::ofstream f(path, std::ios::binary);
            if (!f) throw InputError("cannot write '" + path + "'");
            write_posts(f, in.posts);
            const auto& c = in.counters;
            std::cout << "rows_read=" << c.rows_read << " rejected=" << c.rejected
                      << " duplicates=" << c.duplicates_dropped << " out_of_span=" << c.out_of_span
                      << " bots=" << c.bot_removed << " mapped=" << c.category_mapped
                      << " other=" << c.category_other << " dst_gap=" << c.dst_gap
                      << " dst_overlap=" << c.dst_overlap << " kept=" << in.posts.size() << '\n';
        });
    }
    if (*synth) {
        return run_guarded([&] {
            auto cfg = make_config(synth_c, synth);
            cfg.synth = synth_spec.empty() ? "preset:" + synth_preset : synth_spec;
            const auto in = load_input(cfg);
            const std::string path = synth_c.out.empty() ? "posts.tsv" : synth_c.out;
            std::ofstream f(path, std::ios::binary);
            if (!f) throw InputError("cannot write '" + path + "'");
            write_posts(f, in.posts);
            if (!synth_truth.empty()) {
                std::ofstream t(synth_truth, std::ios::binary);
                if (!t) throw InputError("cannot write '" + synth_truth + "'");
                t << "user,population\n";
                for (std::size_t i = 0; i < in.truth_users.size(); ++i)
                    t << in.truth_users[i] << ',' << in.truth_labels[i] << '\n';
            }
            std::cout << "posts=" << in.posts.size() << " users=" << in.posts.user_count() << '\n';
        });
    }
    if (*cluster) {
        return run_guarded([&] {
            const auto cfg = make_config(cluster_c, cluster);
            kernels::set_threads(cfg.threads);
            const auto in = load_input(cfg);
            const auto model = clustering::cluster_users(in.posts, cfg.threshold, cfg.k_max, cfg.smoothing_minutes);
            std::filesystem::create_directories(cfg.output_dir);
            std::vector<std::string> names;
            for (std::size_t l = 0; l < model.choice.k; ++l) names.push_back(std::to_string(l));
            std::ofstream a(std::filesystem::path(cfg.output_dir) / "assignments.csv", std::ios::binary);
            clustering::write_assignments_csv(a, model, names);
            std::ofstream s(std::filesystem::path(cfg.output_dir) / "index_scores.csv", std::ios::binary);
            clustering::write_index_scores_csv(s, model.choice);
            std::cout << "k=" << model.choice.k << " frequent=" << model.users.size()
                      << " infrequent=" << model.infrequent.size() << '\n';
        });
    }
    if (*analyze || *run) {
        const bool full = run->parsed();
        auto& c = full ? run_c : analyze_c;
        return run_guarded([&] {
            const auto cfg = make_config(c, full ? run : analyze);
            const auto bundle = run_pipeline(cfg);
            print_warnings(bundle);
            const auto files = emit_report(bundle, cfg.output_dir, full && cfg.plots);
            std::cout << "config_hash=" << bundle.config_hash << " groups=" << bundle.groups.size()
                      << " files=" << files.size() << " out=" << cfg.output_dir << '\n';
        });
    }
    if (*report) {
        return run_guarded([&] {
            std::ifstream in(report_bundle);
            if (!in) throw InputError("cannot open bundle '" + report_bundle + "'");
            nlohmann::json j;
            try {
                j = nlohmann::json::parse(in);
            } catch (const nlohmann::json::exception& e) {
                throw InputError(std::string("bad bundle: ") + e.what());
            }
            const auto files = render_plots(j, report_out);
            std::cout << "plots=" << files.size() << " out=" << report_out << '\n';
        });
    }
    return 0;
}
