#pragma once

#include <cstdint>
#include <vector>

namespace litetrack {

/// Dense C×H'×W' activation tensor from a detector layer, channel-outermost
/// row-major, with a stride relating cells to image pixels. The reference
/// configuration is 48 channels at stride 2 (half the image resolution).
class FeatureMap {
public:
    FeatureMap() = default;
    /// Throws std::invalid_argument on non-positive dims, stride < 1, or a
    /// data length that does not equal channels*height*width.
    FeatureMap(int frame_index, int channels, int height, int width, int stride,
               std::vector<float> data);

    int frame_index() const { return frame_index_; }
    int channels() const { return channels_; }
    int height() const { return height_; }
    int width() const { return width_; }
    int stride() const { return stride_; }

    float at(int channel, int row, int col) const {
        return data_[(static_cast<std::size_t>(channel) * height_ + row) * width_ + col];
    }
    float& at(int channel, int row, int col) {
        return data_[(static_cast<std::size_t>(channel) * height_ + row) * width_ + col];
    }

    const std::vector<float>& data() const { return data_; }
    std::vector<float>& data() { return data_; }

private:
    int frame_index_ = 0;
    int channels_ = 0;
    int height_ = 0;
    int width_ = 0;
    int stride_ = 1;
    std::vector<float> data_;
};

/// Feature-map cell region, right/bottom exclusive.
struct CropRegion {
    int left = 0;
    int top = 0;
    int right = 0;
    int bottom = 0;

    int width() const { return right - left; }
    int height() const { return bottom - top; }
    bool empty() const { return right <= left || bottom <= top; }
};

} // namespace litetrack
