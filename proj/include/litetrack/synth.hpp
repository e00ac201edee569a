#pragma once

#include <litetrack/detection_source.hpp>
#include <litetrack/mot_io.hpp>

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

namespace litetrack::synth {

enum class TrajectoryKind { kLinear, kCrossing, kOccluding };

std::string to_string(TrajectoryKind k);
TrajectoryKind trajectory_from_string(const std::string& name);

/// Deterministic scenario generator: targets with known trajectories and
/// appearance identities, noisy detections, and per-frame feature maps painted
/// so descriptor extraction recovers each target's identity vector.
struct SynthConfig {
    int num_targets = 2;
    TrajectoryKind kind = TrajectoryKind::kCrossing;
    /// Pairwise cosine distance between target identity vectors, in [0, 2].
    double appearance_gap = 0.6;
    double box_noise_std = 2.0;        // px, added to detection boxes
    double descriptor_noise_std = 0.05; // activation noise painted into maps
    std::uint64_t seed = 1;

    int num_frames = 100;
    int image_width = 192;
    int image_height = 144;
    int channels = 48;
    int stride = 2;
    double box_width = 16.0;
    double box_height = 32.0;
    int crossing_frame = -1; // -1: mid sequence
    /// Detections are dropped while a target's visible fraction is below this.
    double visibility_floor = 0.4;
    int clutter_per_frame = 0;
    double clutter_confidence_min = 0.05;
    double clutter_confidence_max = 0.2;
    double frame_rate = 30.0;
    std::string name = "synth";

    void validate() const;
    int resolved_crossing_frame() const {
        return crossing_frame > 0 ? crossing_frame : num_frames / 2;
    }
};

class SynthSource;

struct Scenario {
    SequenceMeta meta;
    std::vector<io::GtEntry> gt;
    std::shared_ptr<SynthSource> source;
};

class SynthSource : public DetectionSource {
public:
    SynthSource(const SynthConfig& cfg, bool with_feature_maps);

    const SequenceMeta& meta() const override { return meta_; }
    std::optional<FrameBatch> next() override;
    void attach_descriptors(FrameBatch& batch) override;
    void reset() override { cursor_ = 1; }

    const std::vector<io::GtEntry>& gt() const { return gt_; }
    const std::vector<Eigen::VectorXf>& identities() const { return identities_; }
    FeatureMap build_feature_map(int frame) const;
    std::vector<Descriptor> external_descriptors(int frame) const;
    const std::vector<Detection>& detections(int frame) const {
        return detections_[frame - 1];
    }

private:
    SynthConfig cfg_;
    bool with_feature_maps_;
    SequenceMeta meta_;
    std::vector<io::GtEntry> gt_;
    std::vector<std::vector<Detection>> detections_;   // per frame
    std::vector<std::vector<int>> detection_target_;   // target index or -1 (clutter)
    std::vector<std::vector<BBox>> true_boxes_;        // per frame per target
    std::vector<Eigen::VectorXf> identities_;
    Eigen::VectorXf background_;
    int cursor_ = 1;
};

/// Throws ConfigError on invalid configs (including targets overlapping at spawn).
Scenario make_scenario(const SynthConfig& cfg, bool with_feature_maps = true);

/// Writes the scenario as a MOT-layout directory: seqinfo.ini, gt/gt.txt,
/// det/det.txt, features/*.litefm, descriptors/*.desc.
void write_scenario(const SynthConfig& cfg, const std::filesystem::path& dir);

} // namespace litetrack::synth
