#pragma once

#include <litetrack/feature_map.hpp>
#include <litetrack/geometry.hpp>

#include <vector>

namespace litetrack::lite {

/// Maps an image-space box to feature-map cells with outward rounding
/// (floor/ceil), clamped to the map. A box fully outside the map snaps to the
/// single nearest valid cell, so the result is never empty.
CropRegion map_box(const BBox& bbox, const FeatureMap& fm);

/// Per-channel spatial mean over the region, L2-normalized. A zero pooled
/// vector yields the flagged zero descriptor.
Descriptor extract(const FeatureMap& fm, const CropRegion& region);

/// map_box + extract per detection, order preserved. Detections whose pooled
/// vector is unnormalizable come back flagged rather than aborting the batch.
std::vector<Descriptor> extract_batch(const FeatureMap& fm,
                                      const std::vector<Detection>& detections);

} // namespace litetrack::lite
