#pragma once

#include <litetrack/feature_map.hpp>
#include <litetrack/geometry.hpp>

#include <optional>
#include <string>
#include <vector>

namespace litetrack {

struct SequenceMeta {
    std::string name;
    int image_width = 0;
    int image_height = 0;
    double frame_rate = 0.0;
    int num_frames = 0;
};

struct FrameBatch {
    int frame_index = 0;
    std::vector<Detection> detections;
    std::optional<FeatureMap> feature_map;
};

/// Ordered per-frame detection replay. Frames are yielded strictly increasing
/// and contiguous from 1; feature maps are per-batch values and never retained
/// across frames by consumers.
class DetectionSource {
public:
    virtual ~DetectionSource() = default;

    virtual const SequenceMeta& meta() const = 0;
    virtual std::optional<FrameBatch> next() = 0;
    /// Fills in external appearance descriptors for every detection of the
    /// batch (the external-ReID pathway). No-op when the backend has none.
    virtual void attach_descriptors(FrameBatch& batch) = 0;
    virtual void reset() = 0;
};

} // namespace litetrack
