#include <doctest.h>

#include <litetrack/bench.hpp>
#include <litetrack/synth.hpp>
#include <litetrack/tracker.hpp>

#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>

using namespace litetrack;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("litetrack_bench_" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

double spearman_rho(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    const auto ranks = [n](const std::vector<double>& v) {
        std::vector<double> r(n);
        for (std::size_t i = 0; i < n; ++i) {
            double rank = 1.0;
            for (std::size_t j = 0; j < n; ++j) {
                if (v[j] < v[i]) {
                    rank += 1.0;
                }
            }
            r[i] = rank;
        }
        return r;
    };
    const std::vector<double> rx = ranks(x);
    const std::vector<double> ry = ranks(y);
    double d2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        d2 += (rx[i] - ry[i]) * (rx[i] - ry[i]);
    }
    const double nn = static_cast<double>(n);
    return 1.0 - 6.0 * d2 / (nn * (nn * nn - 1.0));
}

} // namespace

TEST_CASE("fps is frames over total wall time, exactly") {
    synth::SynthConfig cfg;
    cfg.num_frames = 50;
    cfg.kind = synth::TrajectoryKind::kLinear;
    const synth::Scenario sc = synth::make_scenario(cfg, false);
    MultiObjectTracker tracker(TrackerVariant::kSort);
    const bench::RunOutput run = bench::timed_run(tracker, *sc.source);
    CHECK(run.report.frames == 50);
    CHECK(run.report.fps ==
          static_cast<double>(run.report.frames) / run.report.total_seconds);
}

TEST_CASE("stage sums cover at least 95 percent of the total") {
    synth::SynthConfig cfg;
    cfg.num_frames = 200;
    cfg.kind = synth::TrajectoryKind::kCrossing;
    const synth::Scenario sc = synth::make_scenario(cfg, true);
    MultiObjectTracker tracker(TrackerVariant::kLiteDeepSort);
    const bench::RunOutput run = bench::timed_run(tracker, *sc.source);
    const double stage_total = run.report.stage_pre_s + run.report.stage_feat_s +
                               run.report.stage_track_s + run.report.stage_post_s;
    CHECK(stage_total <= run.report.total_seconds);
    CHECK(stage_total >= 0.95 * run.report.total_seconds);
    for (double v : run.timing.pre) {
        CHECK(v >= 0.0);
    }
    for (double v : run.timing.track) {
        CHECK(v >= 0.0);
    }
}

TEST_CASE("bench report fields survive the csv writer") {
    TempDir tmp;
    bench::BenchReport r;
    r.sequence = "synthetic-a";
    r.frames = 123;
    r.total_seconds = 4.5;
    r.fps = 123 / 4.5;
    r.stage_pre_s = 1.0;
    r.stage_feat_s = 0.5;
    r.stage_track_s = 2.5;
    r.stage_post_s = 0.25;
    r.config = {{"variant", "sort"}, {"min_confidence", "0.25"}};

    const fs::path file = tmp.path / "bench.csv";
    bench::write_bench_csv(file, {r});
    bench::write_bench_csv(file, {r}); // append keeps a single header

    std::ifstream in(file);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        lines.push_back(line);
    }
    REQUIRE(lines.size() == 3);
    CHECK(lines[0] ==
          "sequence,frames,total_s,fps,stage_pre_s,stage_feat_s,stage_track_s,"
          "stage_post_s,extra_stages,variant,min_confidence");
    CHECK(lines[1] == lines[2]);
    CHECK(lines[1].find("synthetic-a,123,4.500000") == 0);
    CHECK(lines[1].find(",sort,0.25") != std::string::npos);
}

TEST_CASE("lowering the confidence floor never reduces association candidates") {
    synth::SynthConfig cfg;
    cfg.kind = synth::TrajectoryKind::kLinear;
    cfg.num_targets = 2;
    cfg.clutter_per_frame = 40;
    cfg.clutter_confidence_min = 0.05;
    cfg.clutter_confidence_max = 0.95;
    cfg.num_frames = 30;
    const synth::Scenario sc = synth::make_scenario(cfg, false);

    long long prev_candidates = -1;
    for (const double floor : {0.9, 0.7, 0.5, 0.3, 0.1}) {
        TrackerConfig tcfg;
        tcfg.min_confidence = floor;
        MultiObjectTracker tracker(TrackerVariant::kSort, tcfg);
        long long candidates = 0;
        sc.source->reset();
        while (auto batch = sc.source->next()) {
            candidates +=
                static_cast<long long>(tracker.filter_detections(batch->detections).size());
        }
        CHECK(candidates >= prev_candidates);
        prev_candidates = candidates;
    }
}

TEST_CASE("track-update time grows with detection count (spearman over clutter)") {
    synth::SynthConfig cfg;
    cfg.kind = synth::TrajectoryKind::kLinear;
    cfg.num_targets = 2;
    cfg.clutter_per_frame = 40;
    cfg.clutter_confidence_min = 0.05;
    cfg.clutter_confidence_max = 0.95;
    cfg.num_frames = 60;
    const synth::Scenario sc = synth::make_scenario(cfg, false);

    std::vector<double> candidate_counts;
    std::vector<double> track_time;
    for (const double floor : {0.9, 0.7, 0.5, 0.3, 0.1}) {
        TrackerConfig tcfg;
        tcfg.min_confidence = floor;
        MultiObjectTracker tracker(TrackerVariant::kSort, tcfg);

        long long candidates = 0;
        sc.source->reset();
        while (auto batch = sc.source->next()) {
            candidates +=
                static_cast<long long>(tracker.filter_detections(batch->detections).size());
        }
        const bench::RunOutput run = bench::timed_run(tracker, *sc.source);
        candidate_counts.push_back(static_cast<double>(candidates));
        track_time.push_back(run.report.stage_track_s /
                             static_cast<double>(run.report.frames));
    }
    CHECK(spearman_rho(candidate_counts, track_time) > 0.0);
}

TEST_CASE("degenerate 1x1 sweep grid reduces to a timed evaluated run") {
    TempDir tmp;
    synth::SynthConfig cfg;
    cfg.kind = synth::TrajectoryKind::kLinear;
    cfg.num_frames = 20;
    cfg.name = "SWEEP-SEQ";
    synth::write_scenario(cfg, tmp.path / "640" / "SWEEP-SEQ");

    bench::SweepSpec spec;
    spec.data_root = tmp.path;
    spec.resolutions = {"640"};
    spec.confidences = {0.25};
    spec.variants = {TrackerVariant::kSort};
    const std::vector<bench::SweepCell> cells = bench::run_sweep(spec);
    REQUIRE(cells.size() == 1);
    REQUIRE(cells[0].present);

    // mirror the cell by hand
    io::ReplaySource source(tmp.path / "640" / "SWEEP-SEQ", io::DetKind::kDet);
    MultiObjectTracker tracker(TrackerVariant::kSort);
    const bench::RunOutput run = bench::timed_run(tracker, source);
    const std::vector<io::GtEntry> gt =
        io::load_gt(tmp.path / "640" / "SWEEP-SEQ" / "gt" / "gt.txt");
    const metrics::EvalInput input = metrics::prepare(gt, run.rows);
    const metrics::EvalReport expected = metrics::evaluate("SWEEP-SEQ", input.gt, input.pred);
    CHECK(cells[0].eval.hota.hota == doctest::Approx(expected.hota.hota).epsilon(1e-12));
    CHECK(cells[0].eval.clear.mota == doctest::Approx(expected.clear.mota).epsilon(1e-12));
    CHECK(cells[0].eval.has_fps);
}

TEST_CASE("missing sweep cells are marked absent and the sweep continues") {
    TempDir tmp;
    synth::SynthConfig cfg;
    cfg.kind = synth::TrajectoryKind::kLinear;
    cfg.num_frames = 10;
    cfg.name = "OK";
    synth::write_scenario(cfg, tmp.path / "640" / "OK");

    bench::SweepSpec spec;
    spec.data_root = tmp.path;
    spec.resolutions = {"640", "1280"}; // 1280 does not exist
    spec.confidences = {0.25};
    spec.variants = {TrackerVariant::kSort, TrackerVariant::kLiteDeepSort};
    const std::vector<bench::SweepCell> cells = bench::run_sweep(spec);
    REQUIRE(cells.size() == 4);
    int present = 0;
    for (const bench::SweepCell& c : cells) {
        present += c.present ? 1 : 0;
    }
    CHECK(present == 2); // sort and lite on the existing resolution

    const fs::path csv = tmp.path / "sweep.csv";
    bench::write_sweep_csv(csv, cells);
    std::ifstream in(csv);
    std::string line;
    std::getline(in, line);
    CHECK(line == "tracker,confidence,resolution,sequence,hota,deta,assa,mota,idf1,fps");
    int rows = 0;
    int blank_rows = 0;
    while (std::getline(in, line)) {
        ++rows;
        if (line.find(",,,,,") != std::string::npos) {
            ++blank_rows;
        }
    }
    CHECK(rows == 4);
    CHECK(blank_rows == 2);
}

TEST_CASE("noop tracker emits nothing but timing stays valid") {
    synth::SynthConfig cfg;
    cfg.num_frames = 40;
    cfg.kind = synth::TrajectoryKind::kLinear;
    const synth::Scenario sc = synth::make_scenario(cfg, false);
    bench::NoopTracker noop;
    const bench::RunOutput run = bench::timed_run(noop, *sc.source);
    CHECK(run.rows.empty());
    CHECK(run.report.frames == 40);
    CHECK(run.report.total_seconds > 0.0);
    const bench::RunOutput plain = bench::run_untimed(noop, *sc.source);
    CHECK(plain.report.frames == 40);
    CHECK(plain.timing.pre.empty());
}
