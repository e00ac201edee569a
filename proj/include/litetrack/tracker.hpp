#pragma once

#include <litetrack/association.hpp>
#include <litetrack/feature_map.hpp>
#include <litetrack/geometry.hpp>
#include <litetrack/kalman_filter.hpp>
#include <litetrack/track.hpp>

#include <string>
#include <utility>
#include <vector>

namespace litetrack {

/// sort: motion-only IoU association.
/// deepsort: appearance cascade fed by externally supplied descriptors.
/// lite_deepsort: appearance cascade fed by descriptors pooled from the
/// detector feature map, no external ReID inference.
enum class TrackerVariant { kSort, kDeepSort, kLiteDeepSort };

std::string to_string(TrackerVariant v);
TrackerVariant variant_from_string(const std::string& name);

struct TrackerConfig {
    int n_init = 3;
    int max_age = 30;
    double min_confidence = 0.25;
    double max_iou_distance = 0.7;
    double max_cosine_distance = 0.2;
    int gallery_budget = 100;
    double gating_threshold = kGatingThreshold95;
    bool output_raw_detections = false;
    KalmanNoise noise;

    /// Throws ConfigError on out-of-range values.
    void validate() const;
    std::vector<std::pair<std::string, std::string>> snapshot() const;
};

struct TrackOutput {
    int id = 0;
    BBox box;
    double confidence = 1.0;
};

/// Where a tracker's appearance descriptors come from; drives the
/// descriptor-extraction stage of a timed pipeline run.
enum class DescriptorMode { kNone, kFromFeatureMap, kFromSource };

class TrackerBase {
public:
    virtual ~TrackerBase() = default;
    virtual DescriptorMode descriptor_mode() const = 0;
    /// Drops detections below the confidence floor.
    virtual std::vector<Detection> filter_detections(std::vector<Detection> dets) const = 0;
    /// Core predict/associate/update step over pre-filtered detections that
    /// already carry any required descriptors.
    virtual std::vector<TrackOutput> step_prepared(int frame,
                                                   const std::vector<Detection>& dets) = 0;
    virtual void reset() = 0;
};

class MultiObjectTracker : public TrackerBase {
public:
    MultiObjectTracker(TrackerVariant variant, TrackerConfig config = {});

    /// One frame: confidence filter, descriptor acquisition per variant,
    /// predict, associate, update. Returns the confirmed tracks updated this
    /// frame as (id, box) outputs, ids ascending.
    ///
    /// Throws ConfigError when the LITE variant is stepped without a feature
    /// map or the external-descriptor variant receives detections without
    /// descriptors; throws std::runtime_error on non-increasing frame indices.
    std::vector<TrackOutput> step(int frame, const std::vector<Detection>& detections,
                                  const FeatureMap* feature_map = nullptr);

    DescriptorMode descriptor_mode() const override;
    std::vector<Detection> filter_detections(std::vector<Detection> dets) const override;
    std::vector<TrackOutput> step_prepared(int frame,
                                           const std::vector<Detection>& dets) override;
    void reset() override;

    TrackerVariant variant() const { return variant_; }
    const TrackerConfig& config() const { return config_; }
    const std::vector<Track>& tracks() const { return tracks_; }

private:
    association::MatchResult associate(const std::vector<Detection>& dets) const;

    TrackerVariant variant_;
    TrackerConfig config_;
    KalmanFilter kf_;
    std::vector<Track> tracks_;
    int next_id_ = 1;
    int last_frame_ = 0;
};

} // namespace litetrack
