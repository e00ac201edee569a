#include <litetrack/feature_map.hpp>

#include <stdexcept>
#include <utility>

namespace litetrack {

FeatureMap::FeatureMap(int frame_index, int channels, int height, int width, int stride,
                       std::vector<float> data)
    : frame_index_(frame_index),
      channels_(channels),
      height_(height),
      width_(width),
      stride_(stride),
      data_(std::move(data)) {
    if (channels_ <= 0 || height_ <= 0 || width_ <= 0) {
        throw std::invalid_argument("feature map: dimensions must be positive");
    }
    if (stride_ < 1) {
        throw std::invalid_argument("feature map: stride must be >= 1");
    }
    const std::size_t expected = static_cast<std::size_t>(channels_) * height_ * width_;
    if (data_.size() != expected) {
        throw std::invalid_argument("feature map: data length does not match dimensions");
    }
}

} // namespace litetrack
