// autocop: run the adaptation-learning pipeline and inspect its outputs.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "autocop/harness.hpp"

namespace fs = std::filesystem;
using namespace autocop;

namespace {

struct RunFlags {
    std::string config_file;
    std::string env;
    std::optional<std::uint64_t> seed, steps, episodes, batch_size, max_option_length;
    std::string out;
    std::vector<std::string> sets;
    unsigned repeat = 1;
};

void add_run_flags(CLI::App* cmd, RunFlags& f) {
    cmd->add_option("--config", f.config_file, "key = value configuration file")->check(CLI::ExistingFile);
    cmd->add_option("--env", f.env, "driving or warehouse")->check(CLI::IsMember({"driving", "warehouse"}));
    cmd->add_option("--seed", f.seed, "base seed");
    cmd->add_option("--steps", f.steps, "decision points per phase (driving)");
    cmd->add_option("--episodes", f.episodes, "episodes per phase (warehouse)");
    cmd->add_option("--batch-size", f.batch_size, "trace records per extraction batch");
    cmd->add_option("--max-option-length", f.max_option_length, "longest extracted option");
    cmd->add_option("--out", f.out, "output directory");
    cmd->add_option("--set", f.sets, "extra key=value setting (repeatable)");
    cmd->add_option("--repeat", f.repeat, "run k consecutive seeds in parallel")->check(CLI::PositiveNumber);
}

ExperimentConfig resolve(const RunFlags& f) {
    ExperimentConfig c;
    if (!f.config_file.empty()) c.load_file(f.config_file);
    if (!f.env.empty()) c.environment = parse_env_kind(f.env);
    if (f.seed) c.seed = *f.seed;
    if (f.steps) c.steps = *f.steps;
    if (f.episodes) c.episodes = *f.episodes;
    if (f.batch_size) c.batch_size = *f.batch_size;
    if (f.max_option_length) c.max_option_length = *f.max_option_length;
    if (!f.out.empty()) c.out = f.out;
    for (const auto& kv : f.sets) {
        auto eq = kv.find('=');
        if (eq == std::string::npos) throw Error(Errc::ConfigError, "--set expects key=value, got '" + kv + "'");
        c.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (c.out.empty()) c.out = "autocop-out";
    c.validate();
    return c;
}

MetricsTable run_one(const ExperimentConfig& c, bool baseline, const fs::path& dir) {
    PipelineResult r = baseline ? run_baseline(c) : run_pipeline(c);
    write_outputs(dir, c, r);
    return tabulate(r.metrics);
}

int do_run(const RunFlags& f, bool baseline) {
    const ExperimentConfig base = resolve(f);
    if (f.repeat == 1) {
        run_one(base, baseline, base.out);
        std::ifstream report(fs::path(base.out) / "report.txt");
        std::cout << report.rdbuf();
        return 0;
    }

    std::vector<std::future<MetricsTable>> jobs;
    for (unsigned i = 0; i < f.repeat; ++i) {
        ExperimentConfig c = base;
        c.seed = base.seed + i;
        const fs::path dir = fs::path(base.out) / ("seed-" + std::to_string(c.seed));
        jobs.push_back(std::async(std::launch::async, [c, baseline, dir] { return run_one(c, baseline, dir); }));
    }
    std::ostringstream csv;
    for (unsigned i = 0; i < f.repeat; ++i) {
        const MetricsTable t = jobs[i].get();
        if (i == 0) {
            csv << "seed";
            for (const auto& [k, _] : t.rows) csv << ',' << k;
            csv << '\n';
        }
        csv << base.seed + i;
        for (const auto& [_, v] : t.rows) csv << ',' << format_real(v);
        csv << '\n';
    }
    std::ofstream out(fs::path(base.out) / "summary.csv", std::ios::binary);
    if (!out) throw Error(Errc::IoError, "cannot write summary.csv");
    out << csv.str();
    std::cout << csv.str();
    return 0;
}

MetricsTable load_metrics(const fs::path& dir) {
    std::ifstream in(dir / "metrics.csv");
    if (!in) throw Error(Errc::IoError, "cannot read " + (dir / "metrics.csv").string());
    return read_metrics_csv(in);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Learn options from execution traces and turn them into context adaptations"};
    app.require_subcommand(1);

    RunFlags run_flags, base_flags;
    auto* run = app.add_subcommand("run", "full pipeline: learn, extract, learn options, generate, exploit");
    add_run_flags(run, run_flags);
    auto* baseline = app.add_subcommand("baseline", "primitive actions only: learn and exploit");
    add_run_flags(baseline, base_flags);

    std::string dir_a, dir_b, csv_out;
    auto* compare = app.add_subcommand("compare", "compare metrics of a baseline and an auto-cop run");
    compare->add_option("baseline_dir", dir_a)->required()->check(CLI::ExistingDirectory);
    compare->add_option("autocop_dir", dir_b)->required()->check(CLI::ExistingDirectory);
    compare->add_option("--csv", csv_out, "also write the CSV table here");

    std::string trace_file;
    std::uint64_t episode = 0;
    int grid = 5;
    auto* render = app.add_subcommand("render-path", "draw one warehouse episode of a trace");
    render->add_option("trace", trace_file)->required()->check(CLI::ExistingFile);
    render->add_option("--episode", episode, "episode index");
    render->add_option("--grid-size", grid, "grid side length");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) return do_run(run_flags, false);
        if (*baseline) return do_run(base_flags, true);
        if (*compare) {
            const Comparison c = compare_report(load_metrics(dir_a), load_metrics(dir_b));
            std::cout << c.text;
            if (!csv_out.empty()) {
                std::ofstream out(csv_out, std::ios::binary);
                if (!out) throw Error(Errc::IoError, "cannot write " + csv_out);
                out << c.csv;
            }
            return 0;
        }
        if (*render) {
            std::ifstream in(trace_file);
            if (!in) throw Error(Errc::IoError, "cannot read " + trace_file);
            warehouse::WarehouseConfig wc;
            wc.n = grid;
            std::cout << render_path(Trace::read(in), episode, wc);
            return 0;
        }
    } catch (const Error& e) {
        std::cerr << "autocop: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
