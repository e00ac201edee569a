#include <litetrack/bench.hpp>

#include <litetrack/errors.hpp>
#include <litetrack/lite_extractor.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <fstream>
#include <numeric>
#include <set>
#include <stdexcept>
#include <thread>

namespace litetrack::bench {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_between(Clock::time_point a, Clock::time_point b) {
    if (b < a) {
        throw std::logic_error("bench: monotonic clock stepped backwards");
    }
    return std::chrono::duration<double>(b - a).count();
}

/// Shared frame-processing body for the timed and untimed loops.
void process_batch(TrackerBase& tracker, DetectionSource& source, FrameBatch& batch) {
    const DescriptorMode mode = tracker.descriptor_mode();
    if (mode == DescriptorMode::kFromSource) {
        source.attach_descriptors(batch);
    }
    std::vector<Detection> dets = tracker.filter_detections(std::move(batch.detections));
    if (mode == DescriptorMode::kFromFeatureMap) {
        if (!batch.feature_map) {
            throw ConfigError("lite-deepsort requires feature maps from the source");
        }
        const std::vector<Descriptor> descs = lite::extract_batch(*batch.feature_map, dets);
        for (std::size_t i = 0; i < dets.size(); ++i) {
            dets[i].descriptor = descs[i];
        }
    }
    batch.detections = std::move(dets);
    batch.feature_map.reset(); // maps are per-frame values, never retained
}

void emit_outputs(int frame, const std::vector<TrackOutput>& outputs, RunOutput& out) {
    for (const TrackOutput& t : outputs) {
        const io::ResultRow row{frame, t.id, t.box, t.confidence};
        out.rows.push_back(row);
        out.track_file_text += io::format_result_line(row);
    }
}

} // namespace

double StageTiming::pre_total() const {
    return std::accumulate(pre.begin(), pre.end(), 0.0);
}
double StageTiming::feat_total() const {
    return std::accumulate(feat.begin(), feat.end(), 0.0);
}
double StageTiming::track_total() const {
    return std::accumulate(track.begin(), track.end(), 0.0);
}
double StageTiming::post_total() const {
    return std::accumulate(post.begin(), post.end(), 0.0);
}
double StageTiming::stage_sum() const {
    return pre_total() + feat_total() + track_total() + post_total();
}

RunOutput timed_run(TrackerBase& tracker, DetectionSource& source,
                    std::vector<std::pair<std::string, std::string>> config_snapshot) {
    tracker.reset();
    source.reset();
    RunOutput out;
    const int expected = source.meta().num_frames;
    out.timing.pre.reserve(expected);
    out.timing.feat.reserve(expected);
    out.timing.track.reserve(expected);
    out.timing.post.reserve(expected);
    double trailing_pre = 0.0;
    const Clock::time_point begin = Clock::now();
    while (true) {
        const Clock::time_point t0 = Clock::now();
        std::optional<FrameBatch> batch = source.next();
        const Clock::time_point t1 = Clock::now();
        if (!batch) {
            trailing_pre += seconds_between(t0, t1);
            break;
        }
        process_batch(tracker, source, *batch);
        const Clock::time_point t2 = Clock::now();
        const std::vector<TrackOutput> outputs =
            tracker.step_prepared(batch->frame_index, batch->detections);
        const Clock::time_point t3 = Clock::now();
        emit_outputs(batch->frame_index, outputs, out);
        const Clock::time_point t4 = Clock::now();

        out.timing.pre.push_back(seconds_between(t0, t1));
        out.timing.feat.push_back(seconds_between(t1, t2));
        out.timing.track.push_back(seconds_between(t2, t3));
        out.timing.post.push_back(seconds_between(t3, t4));
        ++out.report.frames;
    }
    const Clock::time_point end = Clock::now();

    out.report.sequence = source.meta().name;
    out.report.total_seconds = seconds_between(begin, end);
    out.report.fps = out.report.total_seconds > 0.0
                         ? static_cast<double>(out.report.frames) / out.report.total_seconds
                         : 0.0;
    out.report.stage_pre_s = out.timing.pre_total() + trailing_pre;
    out.report.stage_feat_s = out.timing.feat_total();
    out.report.stage_track_s = out.timing.track_total();
    out.report.stage_post_s = out.timing.post_total();
    out.report.config = std::move(config_snapshot);
    return out;
}

RunOutput run_untimed(TrackerBase& tracker, DetectionSource& source,
                      std::vector<std::pair<std::string, std::string>> config_snapshot) {
    tracker.reset();
    source.reset();
    RunOutput out;
    const Clock::time_point begin = Clock::now();
    while (true) {
        std::optional<FrameBatch> batch = source.next();
        if (!batch) {
            break;
        }
        process_batch(tracker, source, *batch);
        const std::vector<TrackOutput> outputs =
            tracker.step_prepared(batch->frame_index, batch->detections);
        emit_outputs(batch->frame_index, outputs, out);
        ++out.report.frames;
    }
    const Clock::time_point end = Clock::now();
    out.report.sequence = source.meta().name;
    out.report.total_seconds = seconds_between(begin, end);
    out.report.fps = out.report.total_seconds > 0.0
                         ? static_cast<double>(out.report.frames) / out.report.total_seconds
                         : 0.0;
    out.report.config = std::move(config_snapshot);
    return out;
}

void write_bench_csv(const std::filesystem::path& file,
                     const std::vector<BenchReport>& reports) {
    if (reports.empty()) {
        return;
    }
    if (file.has_parent_path()) {
        std::filesystem::create_directories(file.parent_path());
    }
    const bool fresh =
        !std::filesystem::exists(file) || std::filesystem::file_size(file) == 0;
    std::ofstream out(file, std::ios::app);
    if (!out) {
        throw InputError("cannot open " + file.string());
    }
    if (fresh) {
        out << "sequence,frames,total_s,fps,stage_pre_s,stage_feat_s,stage_track_s,"
               "stage_post_s,extra_stages";
        for (const auto& [key, value] : reports.front().config) {
            out << ',' << key;
        }
        out << '\n';
    }
    char buf[256];
    for (const BenchReport& r : reports) {
        std::snprintf(buf, sizeof(buf), "%s,%d,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,",
                      r.sequence.c_str(), r.frames, r.total_seconds, r.fps, r.stage_pre_s,
                      r.stage_feat_s, r.stage_track_s, r.stage_post_s);
        out << buf;
        for (std::size_t i = 0; i < r.extra_stages.size(); ++i) {
            if (i > 0) {
                out << ';';
            }
            std::snprintf(buf, sizeof(buf), "%s=%.6f", r.extra_stages[i].first.c_str(),
                          r.extra_stages[i].second);
            out << buf;
        }
        for (const auto& [key, value] : r.config) {
            out << ',' << value;
        }
        out << '\n';
    }
}

std::vector<SweepCell> run_sweep(const SweepSpec& spec, int jobs) {
    // resolve the sequence list: explicit, or everything found per resolution
    std::vector<std::string> sequences = spec.sequences;
    if (sequences.empty()) {
        std::set<std::string> found;
        for (const std::string& res : spec.resolutions) {
            const std::filesystem::path dir = spec.data_root / res;
            if (!std::filesystem::is_directory(dir)) {
                continue;
            }
            for (const auto& entry : std::filesystem::directory_iterator(dir)) {
                if (entry.is_directory() &&
                    std::filesystem::exists(entry.path() / "seqinfo.ini")) {
                    found.insert(entry.path().filename().string());
                }
            }
        }
        sequences.assign(found.begin(), found.end());
    }

    std::vector<SweepCell> cells;
    for (TrackerVariant variant : spec.variants) {
        for (double conf : spec.confidences) {
            for (const std::string& res : spec.resolutions) {
                for (const std::string& seq : sequences) {
                    SweepCell cell;
                    cell.tracker = to_string(variant);
                    cell.confidence = conf;
                    cell.resolution = res;
                    cell.sequence = seq;
                    cells.push_back(std::move(cell));
                }
            }
        }
    }

    const auto run_cell = [&](SweepCell& cell) {
        const std::filesystem::path dir = spec.data_root / cell.resolution / cell.sequence;
        if (!std::filesystem::exists(dir / "seqinfo.ini")) {
            return; // absent
        }
        try {
            const TrackerVariant variant = variant_from_string(cell.tracker);
            std::filesystem::path features;
            std::filesystem::path descriptors;
            if (variant == TrackerVariant::kLiteDeepSort) {
                features = dir / "features";
                if (!std::filesystem::is_directory(features)) {
                    return;
                }
            }
            if (variant == TrackerVariant::kDeepSort) {
                descriptors = dir / "descriptors";
                if (!std::filesystem::is_directory(descriptors)) {
                    return;
                }
            }
            io::ReplaySource source(dir, spec.det_kind, features, descriptors);
            TrackerConfig cfg = spec.base_config;
            cfg.min_confidence = cell.confidence;
            MultiObjectTracker tracker(variant, cfg);
            RunOutput run = timed_run(tracker, source);

            const std::vector<io::GtEntry> gt_rows = io::load_gt(dir / "gt" / "gt.txt");
            const metrics::EvalInput input = metrics::prepare(gt_rows, run.rows);
            cell.eval = metrics::evaluate(cell.sequence, input.gt, input.pred);
            cell.eval.fps = run.report.fps;
            cell.eval.has_fps = true;
            cell.present = true;
        } catch (const InputError&) {
            cell.present = false;
        }
    };

    const int workers = std::max(1, std::min<int>(jobs, static_cast<int>(cells.size())));
    if (workers <= 1) {
        for (SweepCell& cell : cells) {
            run_cell(cell);
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                while (true) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= cells.size()) {
                        return;
                    }
                    run_cell(cells[i]);
                }
            });
        }
        for (std::thread& t : pool) {
            t.join();
        }
    }
    return cells;
}

void write_sweep_csv(const std::filesystem::path& file, const std::vector<SweepCell>& cells) {
    if (file.has_parent_path()) {
        std::filesystem::create_directories(file.parent_path());
    }
    std::ofstream out(file);
    if (!out) {
        throw InputError("cannot open " + file.string());
    }
    out << "tracker,confidence,resolution,sequence,hota,deta,assa,mota,idf1,fps\n";
    char buf[256];
    for (const SweepCell& c : cells) {
        std::snprintf(buf, sizeof(buf), "%s,%.4f,%s,%s,", c.tracker.c_str(), c.confidence,
                      c.resolution.c_str(), c.sequence.c_str());
        out << buf;
        if (c.present) {
            std::snprintf(buf, sizeof(buf), "%.6f,%.6f,%.6f,%.6f,%.6f,%.3f",
                          c.eval.hota.hota, c.eval.hota.deta, c.eval.hota.assa,
                          c.eval.clear.mota, c.eval.idf.idf1, c.eval.fps);
            out << buf;
        } else {
            out << ",,,,,";
        }
        out << '\n';
    }
}

} // namespace litetrack::bench
