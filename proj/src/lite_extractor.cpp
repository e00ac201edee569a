#include <litetrack/lite_extractor.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace litetrack::lite {

CropRegion map_box(const BBox& bbox, const FeatureMap& fm) {
    const double s = static_cast<double>(fm.stride());
    CropRegion r;
    r.left = static_cast<int>(std::floor(bbox.x / s));
    r.top = static_cast<int>(std::floor(bbox.y / s));
    r.right = static_cast<int>(std::ceil(bbox.right() / s));
    r.bottom = static_cast<int>(std::ceil(bbox.bottom() / s));

    r.left = std::clamp(r.left, 0, fm.width());
    r.right = std::clamp(r.right, 0, fm.width());
    r.top = std::clamp(r.top, 0, fm.height());
    r.bottom = std::clamp(r.bottom, 0, fm.height());

    // box entirely off the map: snap to the nearest valid cell
    if (r.right <= r.left) {
        const int cell = std::clamp(r.left, 0, fm.width() - 1);
        r.left = cell;
        r.right = cell + 1;
    }
    if (r.bottom <= r.top) {
        const int cell = std::clamp(r.top, 0, fm.height() - 1);
        r.top = cell;
        r.bottom = cell + 1;
    }
    return r;
}

Descriptor extract(const FeatureMap& fm, const CropRegion& region) {
    if (region.empty() || region.left < 0 || region.top < 0 ||
        region.right > fm.width() || region.bottom > fm.height()) {
        throw std::invalid_argument("extract: region must be nonempty and inside the map");
    }
    const int channels = fm.channels();
    Eigen::VectorXf pooled(channels);
    const double cells = static_cast<double>(region.width()) * region.height();
    for (int c = 0; c < channels; ++c) {
        double sum = 0.0;
        for (int row = region.top; row < region.bottom; ++row) {
            for (int col = region.left; col < region.right; ++col) {
                sum += fm.at(c, row, col);
            }
        }
        pooled(c) = static_cast<float>(sum / cells);
    }
    return Descriptor::normalized_from(std::move(pooled));
}

std::vector<Descriptor> extract_batch(const FeatureMap& fm,
                                      const std::vector<Detection>& detections) {
    std::vector<Descriptor> out;
    out.reserve(detections.size());
    for (const Detection& det : detections) {
        out.push_back(extract(fm, map_box(det.bbox, fm)));
    }
    return out;
}

} // namespace litetrack::lite
