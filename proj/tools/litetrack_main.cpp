#include <CLI11.hpp>

#include <litetrack/bench.hpp>
#include <litetrack/errors.hpp>
#include <litetrack/metrics.hpp>
#include <litetrack/mot_io.hpp>
#include <litetrack/overlay.hpp>
#include <litetrack/run_config.hpp>
#include <litetrack/synth.hpp>
#include <litetrack/tracker.hpp>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

namespace {

namespace fs = std::filesystem;
using namespace litetrack;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitParse = 3;
constexpr int kExitRuntime = 4;

struct TrackingCli {
    RunConfig cfg;
    std::string config_file;
    std::map<std::string, CLI::Option*> options; // config key -> option
};

/// Registers the shared tracking flags on a subcommand and keeps the mapping
/// from config-file keys to options so file values only fill unset flags.
void add_tracking_options(CLI::App* cmd, TrackingCli& cli) {
    cli.options["variant"] =
        cmd->add_option("--variant", cli.cfg.variant,
                        "Tracker variant: sort, deepsort, lite-deepsort")
            ->default_val("sort");
    cli.options["n_init"] = cmd->add_option("--n-init", cli.cfg.tracker.n_init,
                                            "Hits required to confirm a track");
    cli.options["max_age"] = cmd->add_option("--max-age", cli.cfg.tracker.max_age,
                                             "Frames a confirmed track survives unmatched");
    cli.options["min_confidence"] =
        cmd->add_option("--min-confidence", cli.cfg.tracker.min_confidence,
                        "Detection confidence floor");
    cli.options["max_iou_distance"] =
        cmd->add_option("--max-iou-distance", cli.cfg.tracker.max_iou_distance,
                        "IoU association cap (1 - IoU)");
    cli.options["max_cosine_distance"] =
        cmd->add_option("--max-cosine-distance", cli.cfg.tracker.max_cosine_distance,
                        "Appearance association cap (cosine distance)");
    cli.options["gallery_budget"] =
        cmd->add_option("--gallery-budget", cli.cfg.tracker.gallery_budget,
                        "Appearance descriptors kept per track");
    cli.options["gating_threshold"] =
        cmd->add_option("--gating-threshold", cli.cfg.tracker.gating_threshold,
                        "Squared Mahalanobis motion gate");
    cli.options["output_raw_detections"] =
        cmd->add_flag("--output-raw-detections", cli.cfg.tracker.output_raw_detections,
                      "Emit matched detection boxes instead of filtered state");
    cli.options["seed"] = cmd->add_option("--seed", cli.cfg.seed, "Run seed (recorded)");
    cli.options["jobs"] =
        cmd->add_option("--jobs", cli.cfg.jobs, "Sequence-level parallel workers");
    cli.options["det_kind"] =
        cmd->add_option("--det", cli.cfg.det_kind, "Detection source: det or gt")
            ->check(CLI::IsMember({"det", "gt"}));
    cmd->add_option("--config", cli.config_file, "key=value config file");
}

/// flag > config file > default.
void merge_config_file(TrackingCli& cli) {
    if (cli.config_file.empty()) {
        return;
    }
    for (const auto& [key, value] : read_config_file(cli.config_file)) {
        const auto it = cli.options.find(key);
        if (it != cli.options.end() && it->second->count() > 0) {
            continue; // explicit flag wins
        }
        apply_config_entry(cli.cfg, key, value);
    }
}

std::vector<fs::path> discover_sequences(const fs::path& input) {
    if (fs::exists(input / "seqinfo.ini")) {
        return {input};
    }
    std::vector<fs::path> out;
    if (!fs::is_directory(input)) {
        throw InputError("input directory not found: " + input.string());
    }
    for (const auto& entry : fs::directory_iterator(input)) {
        if (entry.is_directory() && fs::exists(entry.path() / "seqinfo.ini")) {
            out.push_back(entry.path());
        }
    }
    std::sort(out.begin(), out.end());
    if (out.empty()) {
        throw InputError("no sequences (seqinfo.ini) under " + input.string());
    }
    return out;
}

struct SequenceRun {
    std::string name;
    bench::RunOutput run;
    fs::path result_file;
};

/// Resolves the per-sequence sidecar directories the variant needs and runs
/// the tracker. Throws ConfigError when a required sidecar is missing.
SequenceRun run_one_sequence(const fs::path& seq_dir, const RunConfig& cfg) {
    const TrackerVariant variant = variant_from_string(cfg.variant);
    fs::path features;
    fs::path descriptors;
    if (variant == TrackerVariant::kLiteDeepSort) {
        features = cfg.features.empty() ? seq_dir / "features" : fs::path(cfg.features);
        if (!fs::is_directory(features)) {
            throw ConfigError("lite-deepsort needs feature maps: pass --features or provide " +
                              (seq_dir / "features").string());
        }
    }
    if (variant == TrackerVariant::kDeepSort) {
        descriptors =
            cfg.descriptors.empty() ? seq_dir / "descriptors" : fs::path(cfg.descriptors);
        if (!fs::is_directory(descriptors)) {
            throw ConfigError(
                "deepsort needs external descriptors: pass --descriptors or provide " +
                (seq_dir / "descriptors").string());
        }
    }
    const io::DetKind kind = cfg.det_kind == "gt" ? io::DetKind::kGt : io::DetKind::kDet;
    io::ReplaySource source(seq_dir, kind, features, descriptors);
    MultiObjectTracker tracker(variant, cfg.tracker);

    SequenceRun out;
    out.name = source.meta().name;
    out.run = bench::timed_run(tracker, source, cfg.snapshot());
    return out;
}

template <typename Fn>
void parallel_for(int jobs, std::size_t count, Fn&& fn) {
    const int workers = std::max(1, std::min<int>(jobs, static_cast<int>(count)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            fn(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                while (true) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= count) {
                        return;
                    }
                    fn(i);
                }
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (std::thread& t : pool) {
        t.join();
    }
    for (const std::exception_ptr& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

int cmd_track(TrackingCli& cli, bool with_eval) {
    merge_config_file(cli);
    if (cli.cfg.input.empty() || cli.cfg.output.empty()) {
        throw ConfigError("--input and --out are required");
    }
    const std::vector<fs::path> sequences = discover_sequences(cli.cfg.input);
    if (sequences.size() > 1 && (!cli.cfg.features.empty() || !cli.cfg.descriptors.empty())) {
        throw ConfigError("--features/--descriptors apply to single-sequence input; "
                          "use per-sequence sidecar directories for datasets");
    }
    const fs::path out_dir(cli.cfg.output);
    fs::create_directories(out_dir);

    std::vector<SequenceRun> runs(sequences.size());
    parallel_for(cli.cfg.jobs, sequences.size(), [&](std::size_t i) {
        runs[i] = run_one_sequence(sequences[i], cli.cfg);
        runs[i].result_file = out_dir / (runs[i].name + ".txt");
        std::ofstream out(runs[i].result_file);
        if (!out) {
            throw InputError("cannot create " + runs[i].result_file.string());
        }
        out << runs[i].run.track_file_text;
    });

    std::vector<bench::BenchReport> reports;
    reports.reserve(runs.size());
    for (const SequenceRun& r : runs) {
        reports.push_back(r.run.report);
    }
    bench::write_bench_csv(out_dir / "bench.csv", reports);
    write_resolved_config(out_dir / "resolved_config.txt", cli.cfg);

    std::vector<metrics::EvalReport> evals;
    if (with_eval) {
        for (std::size_t i = 0; i < runs.size(); ++i) {
            const std::vector<io::GtEntry> gt_rows =
                io::load_gt(sequences[i] / "gt" / "gt.txt");
            const metrics::EvalInput input = metrics::prepare(gt_rows, runs[i].run.rows);
            metrics::EvalReport report =
                metrics::evaluate(runs[i].name, input.gt, input.pred);
            report.fps = runs[i].run.report.fps;
            report.has_fps = true;
            evals.push_back(std::move(report));
        }
        if (evals.size() > 1) {
            evals.push_back(metrics::pool(evals));
        }
        metrics::write_eval_csv(out_dir / "report.csv", evals);
        for (const metrics::EvalReport& r : evals) {
            std::cout << metrics::format_eval_text(r) << '\n';
        }
    }

    for (const SequenceRun& r : runs) {
        std::cout << r.name << ": frames=" << r.run.report.frames << " fps=" << std::fixed
                  << std::setprecision(2) << r.run.report.fps << " -> "
                  << r.result_file.string() << '\n';
        std::cout.unsetf(std::ios::fixed);
    }
    return kExitOk;
}

int cmd_eval(const std::string& gt_arg, const std::string& results_arg,
             const std::string& csv_out) {
    const fs::path gt_path(gt_arg);
    const fs::path results_path(results_arg);

    std::vector<std::pair<fs::path, fs::path>> pairs; // (sequence dir, results file)
    if (fs::exists(gt_path / "seqinfo.ini") || fs::exists(gt_path / "gt" / "gt.txt")) {
        fs::path results = results_path;
        if (fs::is_directory(results)) {
            const SequenceMeta meta = io::parse_seqinfo(gt_path / "seqinfo.ini");
            results = results_path / (meta.name + ".txt");
        }
        pairs.emplace_back(gt_path, results);
    } else {
        for (const fs::path& seq : discover_sequences(gt_path)) {
            const fs::path results = results_path / (seq.filename().string() + ".txt");
            if (fs::exists(results)) {
                pairs.emplace_back(seq, results);
            } else {
                std::cerr << "eval: no results for " << seq.filename().string()
                          << ", skipping\n";
            }
        }
        if (pairs.empty()) {
            throw InputError("no (gt, results) pairs found");
        }
    }

    std::vector<metrics::EvalReport> reports;
    for (const auto& [seq_dir, results_file] : pairs) {
        const std::vector<io::GtEntry> gt_rows = io::load_gt(seq_dir / "gt" / "gt.txt");
        const std::vector<io::ResultRow> rows = io::load_results(results_file);
        const metrics::EvalInput input = metrics::prepare(gt_rows, rows);
        std::string name = seq_dir.filename().string();
        if (fs::exists(seq_dir / "seqinfo.ini")) {
            name = io::parse_seqinfo(seq_dir / "seqinfo.ini").name;
        }
        reports.push_back(metrics::evaluate(name, input.gt, input.pred));
    }
    if (reports.size() > 1) {
        reports.push_back(metrics::pool(reports));
    }
    for (const metrics::EvalReport& r : reports) {
        std::cout << metrics::format_eval_text(r) << '\n';
    }
    if (!csv_out.empty()) {
        metrics::write_eval_csv(csv_out, reports);
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"litetrack: multi-object tracking with detector-native appearance "
                 "descriptors, metrics, and holistic pipeline benchmarking"};
    app.require_subcommand(1);

    // track
    TrackingCli track_cli;
    CLI::App* track = app.add_subcommand("track", "Run a tracker over a sequence directory");
    track->add_option("--input", track_cli.cfg.input,
                      "Sequence directory (seqinfo.ini) or dataset root")
        ->required();
    track->add_option("--out", track_cli.cfg.output, "Output directory")->required();
    track->add_option("--features", track_cli.cfg.features,
                      "Feature-map directory (*.litefm), default <input>/features");
    track->add_option("--descriptors", track_cli.cfg.descriptors,
                      "External descriptor directory (*.desc), default <input>/descriptors");
    add_tracking_options(track, track_cli);

    // bench = track + eval
    TrackingCli bench_cli;
    CLI::App* bench_cmd =
        app.add_subcommand("bench", "Run a tracker and report metrics plus stage timings");
    bench_cmd->add_option("--input", bench_cli.cfg.input,
                          "Sequence directory or dataset root (needs gt/)")
        ->required();
    bench_cmd->add_option("--out", bench_cli.cfg.output, "Output directory")->required();
    bench_cmd->add_option("--features", bench_cli.cfg.features,
                          "Feature-map directory, default <input>/features");
    bench_cmd->add_option("--descriptors", bench_cli.cfg.descriptors,
                          "External descriptor directory, default <input>/descriptors");
    add_tracking_options(bench_cmd, bench_cli);

    // eval
    CLI::App* eval_cmd = app.add_subcommand("eval", "Score result files against ground truth");
    std::string eval_gt;
    std::string eval_results;
    std::string eval_csv;
    eval_cmd->add_option("--gt", eval_gt, "Sequence directory or dataset root")->required();
    eval_cmd->add_option("--results", eval_results, "Results file or directory")->required();
    eval_cmd->add_option("--out", eval_csv, "Optional CSV output path");

    // sweep
    TrackingCli sweep_cli;
    CLI::App* sweep_cmd = app.add_subcommand(
        "sweep", "Grid of detector settings x tracker variants, long-format CSV");
    std::vector<std::string> sweep_resolutions;
    std::vector<double> sweep_confidences;
    std::vector<std::string> sweep_variants;
    std::vector<std::string> sweep_sequences;
    sweep_cmd
        ->add_option("--data-root", sweep_cli.cfg.input,
                     "Root directory: <root>/<resolution>/<sequence>/")
        ->required();
    sweep_cmd->add_option("--out", sweep_cli.cfg.output, "Output directory")->required();
    sweep_cmd->add_option("--resolutions", sweep_resolutions, "Resolution tags")
        ->required()
        ->delimiter(',');
    sweep_cmd->add_option("--confidences", sweep_confidences, "Confidence thresholds")
        ->required()
        ->delimiter(',');
    sweep_cmd->add_option("--variants", sweep_variants, "Tracker variants")
        ->required()
        ->delimiter(',');
    sweep_cmd->add_option("--sequences", sweep_sequences, "Sequence names (default: discover)")
        ->delimiter(',');
    add_tracking_options(sweep_cmd, sweep_cli);

    // synth
    CLI::App* synth_cmd =
        app.add_subcommand("synth", "Generate a synthetic MOT sequence with feature maps");
    synth::SynthConfig synth_cfg;
    std::string synth_kind = "crossing";
    std::string synth_out;
    synth_cmd->add_option("--out", synth_out, "Output sequence directory")->required();
    synth_cmd->add_option("--kind", synth_kind, "Trajectory kind: linear, crossing, occluding");
    synth_cmd->add_option("--targets", synth_cfg.num_targets, "Number of targets");
    synth_cmd->add_option("--frames", synth_cfg.num_frames, "Sequence length");
    synth_cmd->add_option("--seed", synth_cfg.seed, "Generator seed");
    synth_cmd->add_option("--gap", synth_cfg.appearance_gap,
                          "Pairwise cosine separation of identities");
    synth_cmd->add_option("--box-noise", synth_cfg.box_noise_std, "Detection box noise (px)");
    synth_cmd->add_option("--desc-noise", synth_cfg.descriptor_noise_std,
                          "Descriptor/activation noise");
    synth_cmd->add_option("--clutter", synth_cfg.clutter_per_frame,
                          "Low-confidence clutter detections per frame");
    synth_cmd->add_option("--image-width", synth_cfg.image_width, "Image width (px)");
    synth_cmd->add_option("--image-height", synth_cfg.image_height, "Image height (px)");
    synth_cmd->add_option("--name", synth_cfg.name, "Sequence name");

    // render-overlay
    CLI::App* overlay_cmd =
        app.add_subcommand("render-overlay", "Render id-colored boxes per frame (PPM)");
    std::string overlay_input;
    std::string overlay_results;
    std::string overlay_out;
    std::string overlay_images;
    overlay_cmd->add_option("--input", overlay_input, "Sequence directory (seqinfo.ini)")
        ->required();
    overlay_cmd->add_option("--results", overlay_results, "MOT results file")->required();
    overlay_cmd->add_option("--out", overlay_out, "Output frame directory")->required();
    overlay_cmd->add_option("--images", overlay_images,
                            "Optional background frames ({frame:06}.ppm)");

    // fm-pack
    CLI::App* fm_cmd = app.add_subcommand("fm-pack", "Feature-map file tooling");
    fm_cmd->require_subcommand(1);
    CLI::App* fm_info = fm_cmd->add_subcommand("info", "Print header and value stats");
    std::string fm_info_file;
    fm_info->add_option("file", fm_info_file, "Feature-map file")->required();
    CLI::App* fm_make = fm_cmd->add_subcommand("make", "Write a constant-fill feature map");
    std::string fm_make_out;
    int fm_make_channels = 48;
    int fm_make_height = 16;
    int fm_make_width = 16;
    int fm_make_stride = 2;
    int fm_make_frame = 1;
    double fm_make_fill = 1.0;
    fm_make->add_option("--out", fm_make_out, "Output file")->required();
    fm_make->add_option("--channels", fm_make_channels, "Channels");
    fm_make->add_option("--height", fm_make_height, "Cells high");
    fm_make->add_option("--width", fm_make_width, "Cells wide");
    fm_make->add_option("--stride", fm_make_stride, "Pixels per cell");
    fm_make->add_option("--frame", fm_make_frame, "Frame index");
    fm_make->add_option("--fill", fm_make_fill, "Fill value");
    CLI::App* fm_dump = fm_cmd->add_subcommand("dump", "Dump values as CSV");
    std::string fm_dump_file;
    std::string fm_dump_out;
    fm_dump->add_option("file", fm_dump_file, "Feature-map file")->required();
    fm_dump->add_option("--out", fm_dump_out, "CSV output path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*track) {
            return cmd_track(track_cli, /*with_eval=*/false);
        }
        if (*bench_cmd) {
            return cmd_track(bench_cli, /*with_eval=*/true);
        }
        if (*eval_cmd) {
            return cmd_eval(eval_gt, eval_results, eval_csv);
        }
        if (*sweep_cmd) {
            merge_config_file(sweep_cli);
            bench::SweepSpec spec;
            spec.data_root = sweep_cli.cfg.input;
            spec.resolutions = sweep_resolutions;
            spec.confidences = sweep_confidences;
            for (const std::string& v : sweep_variants) {
                spec.variants.push_back(variant_from_string(v));
            }
            spec.sequences = sweep_sequences;
            spec.base_config = sweep_cli.cfg.tracker;
            spec.det_kind =
                sweep_cli.cfg.det_kind == "gt" ? io::DetKind::kGt : io::DetKind::kDet;
            const std::vector<bench::SweepCell> cells =
                bench::run_sweep(spec, sweep_cli.cfg.jobs);
            const fs::path out_dir(sweep_cli.cfg.output);
            fs::create_directories(out_dir);
            bench::write_sweep_csv(out_dir / "sweep.csv", cells);
            write_resolved_config(out_dir / "resolved_config.txt", sweep_cli.cfg);
            int present = 0;
            for (const bench::SweepCell& c : cells) {
                present += c.present ? 1 : 0;
            }
            std::cout << "sweep: " << present << "/" << cells.size() << " cells -> "
                      << (out_dir / "sweep.csv").string() << '\n';
            return kExitOk;
        }
        if (*synth_cmd) {
            synth_cfg.kind = synth::trajectory_from_string(synth_kind);
            synth::write_scenario(synth_cfg, synth_out);
            std::cout << "synth: wrote " << synth_cfg.num_frames << " frames to " << synth_out
                      << '\n';
            return kExitOk;
        }
        if (*overlay_cmd) {
            const SequenceMeta meta = io::parse_seqinfo(fs::path(overlay_input) / "seqinfo.ini");
            const std::vector<io::ResultRow> rows = io::load_results(overlay_results);
            overlay::OverlayOptions opts;
            opts.images_dir = overlay_images;
            const int written = overlay::render_overlay(meta, rows, overlay_out, opts);
            std::cout << "render-overlay: wrote " << written << " frames to " << overlay_out
                      << '\n';
            return kExitOk;
        }
        if (*fm_cmd) {
            if (*fm_info) {
                const FeatureMap fm = io::read_feature_map(fm_info_file);
                double lo = fm.data().empty() ? 0.0 : fm.data()[0];
                double hi = lo;
                double sum = 0.0;
                for (float v : fm.data()) {
                    lo = std::min(lo, static_cast<double>(v));
                    hi = std::max(hi, static_cast<double>(v));
                    sum += v;
                }
                std::cout << "frame=" << fm.frame_index() << " channels=" << fm.channels()
                          << " height=" << fm.height() << " width=" << fm.width()
                          << " stride=" << fm.stride() << " min=" << lo << " max=" << hi
                          << " mean=" << sum / static_cast<double>(fm.data().size()) << '\n';
            } else if (*fm_make) {
                const std::size_t count = static_cast<std::size_t>(fm_make_channels) *
                                          fm_make_height * fm_make_width;
                std::vector<float> data(count, static_cast<float>(fm_make_fill));
                const FeatureMap fm(fm_make_frame, fm_make_channels, fm_make_height,
                                    fm_make_width, fm_make_stride, std::move(data));
                io::write_feature_map(fm_make_out, fm);
                std::cout << "fm-pack: wrote " << fm_make_out << '\n';
            } else if (*fm_dump) {
                const FeatureMap fm = io::read_feature_map(fm_dump_file);
                std::ofstream out(fm_dump_out);
                if (!out) {
                    throw InputError("cannot create " + fm_dump_out);
                }
                out << "channel,row,col,value\n";
                for (int c = 0; c < fm.channels(); ++c) {
                    for (int r = 0; r < fm.height(); ++r) {
                        for (int col = 0; col < fm.width(); ++col) {
                            out << c << ',' << r << ',' << col << ',' << fm.at(c, r, col)
                                << '\n';
                        }
                    }
                }
                std::cout << "fm-pack: dumped to " << fm_dump_out << '\n';
            }
            return kExitOk;
        }
    } catch (const ConfigError& e) {
        std::cerr << "error[config]: " << e.what() << '\n';
        return kExitUsage;
    } catch (const InputError& e) {
        std::cerr << "error[parse]: " << e.what() << '\n';
        return kExitParse;
    } catch (const std::exception& e) {
        std::cerr << "error[runtime]: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitOk;
}
