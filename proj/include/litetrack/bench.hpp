#pragma once

#include <litetrack/detection_source.hpp>
#include <litetrack/metrics.hpp>
#include <litetrack/mot_io.hpp>
#include <litetrack/tracker.hpp>

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace litetrack::bench {

/// Per-frame wall-clock durations for the pipeline stages: source ingest /
/// pre-processing, descriptor extraction, tracker predict+update, output
/// formatting. Adjacent stages share boundary timestamps, so per-frame stage
/// sums equal the frame wall time; only inter-frame loop overhead is
/// unaccounted.
struct StageTiming {
    std::vector<double> pre;
    std::vector<double> feat;
    std::vector<double> track;
    std::vector<double> post;

    double pre_total() const;
    double feat_total() const;
    double track_total() const;
    double post_total() const;
    double stage_sum() const;
};

struct BenchReport {
    std::string sequence;
    int frames = 0;
    double total_seconds = 0.0;
    double fps = 0.0; // frames / total_seconds, total wall time semantics
    double stage_pre_s = 0.0;
    double stage_feat_s = 0.0;
    double stage_track_s = 0.0;
    double stage_post_s = 0.0;
    /// Extra stage totals a live detector backend would report
    /// (pre-process/inference/post-process); empty for the replay backend.
    std::vector<std::pair<std::string, double>> extra_stages;
    std::vector<std::pair<std::string, std::string>> config;
};

struct RunOutput {
    std::vector<io::ResultRow> rows;
    std::string track_file_text; // formatted MOT result lines
    BenchReport report;
    StageTiming timing;
};

/// Runs the tracker over the whole source with per-stage instrumentation.
/// Resets tracker and source first. FPS is frames over total wall time of the
/// entire loop, never a per-frame best case. Throws std::logic_error if the
/// monotonic clock ever steps backwards.
RunOutput timed_run(TrackerBase& tracker, DetectionSource& source,
                    std::vector<std::pair<std::string, std::string>> config_snapshot = {});

/// Identical pipeline without per-stage timestamps; used to bound the
/// instrumentation overhead.
RunOutput run_untimed(TrackerBase& tracker, DetectionSource& source,
                      std::vector<std::pair<std::string, std::string>> config_snapshot = {});

/// Tracker that ignores every detection and emits nothing.
class NoopTracker : public TrackerBase {
public:
    DescriptorMode descriptor_mode() const override { return DescriptorMode::kNone; }
    std::vector<Detection> filter_detections(std::vector<Detection> dets) const override {
        return dets;
    }
    std::vector<TrackOutput> step_prepared(int, const std::vector<Detection>&) override {
        return {};
    }
    void reset() override {}
};

/// Appends rows to a bench CSV (header written once):
/// sequence,frames,total_s,fps,stage_pre_s,stage_feat_s,stage_track_s,
/// stage_post_s,extra_stages,<config keys of the first report...>
void write_bench_csv(const std::filesystem::path& file,
                     const std::vector<BenchReport>& reports);

struct SweepSpec {
    std::filesystem::path data_root; // data_root/<resolution>/<sequence>/...
    std::vector<std::string> resolutions;
    std::vector<double> confidences;
    std::vector<TrackerVariant> variants;
    std::vector<std::string> sequences; // empty: discover under each resolution
    TrackerConfig base_config;
    io::DetKind det_kind = io::DetKind::kDet;
};

struct SweepCell {
    std::string tracker;
    double confidence = 0.0;
    std::string resolution;
    std::string sequence;
    bool present = false;
    metrics::EvalReport eval; // fps populated from the timed run
};

/// One timed, evaluated run per grid cell. Cells whose inputs are missing are
/// marked absent and the sweep continues. jobs > 1 runs cells in parallel
/// worker slots (each cell still single-threaded).
std::vector<SweepCell> run_sweep(const SweepSpec& spec, int jobs = 1);

/// Long-format CSV: tracker,confidence,resolution,sequence,hota,deta,assa,
/// mota,idf1,fps. Absent cells keep empty metric fields.
void write_sweep_csv(const std::filesystem::path& file, const std::vector<SweepCell>& cells);

} // namespace litetrack::bench
