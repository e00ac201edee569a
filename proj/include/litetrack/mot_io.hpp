#pragma once

#include <litetrack/detection_source.hpp>
#include <litetrack/feature_map.hpp>
#include <litetrack/geometry.hpp>

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace litetrack::io {

/// Parses seqinfo.ini ([Sequence] section; name, imWidth, imHeight, frameRate,
/// seqLength required). Throws InputError with location on malformed input.
SequenceMeta parse_seqinfo(const std::filesystem::path& file);

struct GtEntry {
    int frame = 0;
    int id = 0;
    BBox box;
    bool considered = true;
    int class_id = 1;
    double visibility = 1.0;
};

struct DetEntry {
    int frame = 0;
    BBox box;
    double confidence = 0.0;
};

struct ResultRow {
    int frame = 0;
    int id = 0;
    BBox box;
    double confidence = 1.0;
};

/// MOT ground-truth file: frame,id,x,y,w,h,considered,class,visibility.
/// Rows with non-positive extents or malformed fields raise InputError with
/// the line number. Frames must be non-decreasing within each id.
std::vector<GtEntry> load_gt(const std::filesystem::path& file);

/// MOT detection file: frame,-1,x,y,w,h,conf[,...]. The id column is ignored;
/// confidences are clamped into [0,1].
std::vector<DetEntry> load_det(const std::filesystem::path& file);

std::vector<ResultRow> load_results(const std::filesystem::path& file);

/// One MOT result line: frame,id,x,y,w,h,conf,-1,-1,-1 with 2-decimal fixed
/// point, trailing newline.
std::string format_result_line(const ResultRow& row);
void write_results(const std::filesystem::path& file, const std::vector<ResultRow>& rows);
void write_gt(const std::filesystem::path& file, const std::vector<GtEntry>& rows);
void write_det(const std::filesystem::path& file, const std::vector<DetEntry>& rows);

/// Feature-map container, one frame per file. Little-endian layout: magic
/// "LITEFM01"; u32 frame_index, channels, height, width, stride; then
/// channels*height*width float32 values, channel-outermost row-major.
FeatureMap read_feature_map(const std::filesystem::path& file);
void write_feature_map(const std::filesystem::path& file, const FeatureMap& fm);
std::string feature_map_filename(int frame);

/// External per-frame descriptors, aligned with the frame's det.txt rows.
/// Little-endian: magic "LITEDS01"; u32 frame_index, count, dim; then
/// count*dim float32 values row-major. Vectors are L2-normalized on load.
std::vector<Descriptor> read_descriptors(const std::filesystem::path& file,
                                         int expected_frame);
void write_descriptors(const std::filesystem::path& file, int frame,
                       const std::vector<Descriptor>& descriptors);
std::string descriptor_filename(int frame);

enum class DetKind { kDet, kGt };

/// Replays a MOT-layout sequence directory as a DetectionSource. Detections
/// come from det/det.txt or gt/gt.txt; feature maps and external descriptors
/// are read per frame from optional sidecar directories.
class ReplaySource : public DetectionSource {
public:
    ReplaySource(const std::filesystem::path& sequence_dir, DetKind kind,
                 std::filesystem::path features_dir = {},
                 std::filesystem::path descriptors_dir = {});

    const SequenceMeta& meta() const override { return meta_; }
    std::optional<FrameBatch> next() override;
    void attach_descriptors(FrameBatch& batch) override;
    void reset() override { cursor_ = 1; }

    bool has_feature_maps() const { return !features_dir_.empty(); }
    bool has_descriptors() const { return !descriptors_dir_.empty(); }

private:
    SequenceMeta meta_;
    std::map<int, std::vector<Detection>> frames_;
    std::filesystem::path features_dir_;
    std::filesystem::path descriptors_dir_;
    int cursor_ = 1;
};

/// Wraps another source and sleeps a fixed interval in attach_descriptors,
/// standing in for an external ReID network's per-frame inference cost.
class SimulatedReidDelaySource : public DetectionSource {
public:
    SimulatedReidDelaySource(DetectionSource& inner, double delay_seconds)
        : inner_(inner), delay_seconds_(delay_seconds) {}

    const SequenceMeta& meta() const override { return inner_.meta(); }
    std::optional<FrameBatch> next() override { return inner_.next(); }
    void attach_descriptors(FrameBatch& batch) override;
    void reset() override { inner_.reset(); }

private:
    DetectionSource& inner_;
    double delay_seconds_;
};

} // namespace litetrack::io
