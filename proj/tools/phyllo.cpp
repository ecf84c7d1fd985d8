// Command-line front end: run, analyze, render, oracle, compare.
//
// Exit codes: 0 success, 2 configuration, 3 solver, 4 I/O, 5 corrupt checkpoint.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <numeric>

#include <CLI11.hpp>

#include "phyllo/image.hpp"
#include "phyllo/pipeline.hpp"

namespace fs = std::filesystem;
using namespace phyllo;

namespace {

enum Exit { kOk = 0, kConfig = 2, kSolver = 3, kIo = 4, kCorrupt = 5 };

struct RunArgs {
    std::string preset;
    std::string config;
    std::string resume;
    std::map<std::string, std::string> overrides;
    bool quiet = false;
};

int do_run(RunArgs& args) {
    RunConfig cfg = args.preset.empty() ? RunConfig{} : preset(args.preset);
    if (!args.config.empty()) cfg = load_config(args.config, cfg);
    for (const auto& key : config_keys()) {
        const auto it = args.overrides.find(key);
        if (it != args.overrides.end() && !it->second.empty()) apply_setting(cfg, key, it->second);
    }
    cfg.validate();

    RunHooks hooks;
    if (!args.resume.empty()) hooks.resume = load_checkpoint(args.resume);
    if (!args.quiet)
        hooks.progress = [&](double t, std::uint64_t step, double e) {
            if (step % 20 == 0) std::fprintf(stderr, "step %llu  t = %.2f  E = %.10g\n", (unsigned long long)step, t, e);
        };
    const RunOutput out = run_simulation(cfg, hooks);
    std::printf("completed t = %.6g after %llu steps; outputs in %s\n", out.t, (unsigned long long)out.steps,
                cfg.output_dir.c_str());
    return kOk;
}

int do_analyze(const std::string& ckpt, const std::string& out_dir, double r_step) {
    const Checkpoint c = load_checkpoint(ckpt);
    AnalysisOptions opts;
    opts.r_step = r_step;
    const Analysis a = analyze_field(c.field, c.params, opts);
    write_analysis(out_dir, a);
    std::printf("analysis of t = %.6g written to %s\n", c.t, out_dir.c_str());
    return kOk;
}

int do_render(const std::string& ckpt, const std::string& image, int size) {
    const Checkpoint c = load_checkpoint(ckpt);
    render_png(c.field, image, size);
    return kOk;
}

int do_oracle(int count, double rise, double exponent, double circumference, int ramp, const std::string& out_dir) {
    PointConfig start;
    start.circumference = circumference;
    PlacementOptions opts;
    opts.ramp_points = ramp;
    const PointConfig pts = place_points(count, rise, exponent, start, opts);
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec || !fs::is_directory(out_dir)) throw IoError("cannot create output directory " + out_dir);
    write_csv(fs::path(out_dir) / "points.csv", points_table(pts));

    std::string summary = "count=" + std::to_string(count) + "\nrise=" + format_number(rise) +
                          "\nexponent=" + format_number(exponent) + "\ncircumference=" + format_number(circumference) +
                          "\ngolden_angle=" + format_number(GoldenConstants::golden_angle) + "\n";
    if (pts.points.size() >= 2) {
        const auto d = divergence_series(pts);
        const std::size_t tail = std::min<std::size_t>(d.size(), 50);
        double mean = 0.0, dev = 0.0;
        for (std::size_t k = d.size() - tail; k < d.size(); ++k) {
            mean += std::abs(d[k]);
            dev = std::max(dev, std::abs(std::abs(d[k]) - GoldenConstants::golden_angle));
        }
        summary += "final_divergence=" + format_number(std::abs(d.back())) +
                   "\nmean_divergence_tail=" + format_number(mean / double(tail)) +
                   "\nmax_golden_deviation_tail=" + format_number(dev) + "\n";
    }
    write_file_atomic(fs::path(out_dir) / "summary.txt", summary);
    std::fputs(summary.c_str(), stdout);
    return kOk;
}

int do_compare(const std::string& a, const std::string& b, const std::string& out) {
    const PointConfig pa = points_from_table(read_csv(a));
    const PointConfig pb = points_from_table(read_csv(b));
    const Comparison c = compare_maxima(pa, pb);
    const std::string summary = "mean_distance=" + format_number(c.mean_distance) +
                                "\nmatched_fraction=" + format_number(c.matched_fraction) +
                                "\nrotation=" + format_number(c.rotation) +
                                "\naxial_shift=" + format_number(c.axial_shift) + "\n";
    if (!out.empty()) write_file_atomic(out, summary);
    std::fputs(summary.c_str(), stdout);
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Phyllotaxis pattern-front simulator and analysis toolkit"};
    app.require_subcommand(1);

    RunArgs run_args;
    auto* run = app.add_subcommand("run", "evolve a seeded configuration");
    run->add_option("--preset", run_args.preset, "desk-13-21, desk-21-34 or paper-89-144");
    run->add_option("--config", run_args.config, "key = value file applied after the preset");
    run->add_option("--resume", run_args.resume, "continue from a checkpoint");
    run->add_flag("--quiet", run_args.quiet, "suppress progress output");
    for (const auto& key : config_keys()) run->add_option("--" + key, run_args.overrides[key], "config override");

    std::string ckpt, out_dir = "analysis";
    double r_step = 0.5;
    auto* analyze = app.add_subcommand("analyze", "mode, lattice and van Iterson tables from a checkpoint");
    analyze->add_option("checkpoint", ckpt)->required();
    analyze->add_option("--out", out_dir, "output directory");
    analyze->add_option("--r-step", r_step, "spacing of lattice sample radii");

    std::string image;
    int size = 512;
    auto* render = app.add_subcommand("render", "pseudocolour PNG of a checkpoint");
    render->add_option("checkpoint", ckpt)->required();
    render->add_option("image", image)->required();
    render->add_option("--size", size, "image edge in pixels");

    int count = 500, ramp = PlacementOptions{}.ramp_points;
    double rise = 0.02, exponent = 3.0, circumference = 2.0 * std::numbers::pi;
    std::string oracle_out = "oracle";
    auto* oracle = app.add_subcommand("oracle", "repulsion point-placement reference");
    oracle->add_option("--count", count);
    oracle->add_option("--rise", rise);
    oracle->add_option("--exponent", exponent);
    oracle->add_option("--circumference", circumference);
    oracle->add_option("--ramp", ramp, "placements over which the rise shrinks to --rise (0 disables)");
    oracle->add_option("--out", oracle_out, "output directory");

    std::string a_csv, b_csv, summary_out;
    auto* compare = app.add_subcommand("compare", "register two point sets and score their agreement");
    compare->add_option("a", a_csv)->required();
    compare->add_option("b", b_csv)->required();
    compare->add_option("--out", summary_out, "key=value summary file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfig;
    }

    try {
        if (*run) return do_run(run_args);
        if (*analyze) return do_analyze(ckpt, out_dir, r_step);
        if (*render) return do_render(ckpt, image, size);
        if (*oracle) return do_oracle(count, rise, exponent, circumference, ramp, oracle_out);
        if (*compare) return do_compare(a_csv, b_csv, summary_out);
    } catch (const CorruptCheckpoint& e) {
        std::cerr << "corrupt checkpoint: " << e.what() << "\n";
        return kCorrupt;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return kIo;
    } catch (const NoConvergence& e) {
        std::cerr << "solver failure: " << e.what() << " (iterations " << e.iterations() << ", residual "
                  << e.residual() << ")\n";
        return kSolver;
    } catch (const InvalidArgument& e) {
        std::cerr << "invalid configuration: " << e.what() << "\n";
        return kConfig;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return kIo;
    }
    return kOk;
}
