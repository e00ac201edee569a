#pragma once

#include <Eigen/Core>
#include <optional>
#include <vector>

namespace litetrack {

/// Axis-aligned box, top-left + extent parameterization, sub-pixel coordinates.
struct BBox {
    double x = 0.0; // left
    double y = 0.0; // top
    double w = 0.0;
    double h = 0.0;

    double right() const { return x + w; }
    double bottom() const { return y + h; }
    double cx() const { return x + 0.5 * w; }
    double cy() const { return y + 0.5 * h; }
    double area() const { return w * h; }
    bool has_positive_extent() const { return w > 0.0 && h > 0.0; }

    static BBox from_tlbr(double left, double top, double rgt, double bot) {
        return BBox{left, top, rgt - left, bot - top};
    }
};

/// Measurement-space box: center, aspect ratio (w/h), height.
struct Xyah {
    double cx = 0.0;
    double cy = 0.0;
    double aspect = 1.0;
    double height = 0.0;
};

Xyah tlwh_to_xyah(const BBox& b);
BBox xyah_to_tlwh(const Xyah& m);

/// Intersection over union. Both boxes must have positive extents.
double iou(const BBox& a, const BBox& b);

/// Appearance vector pooled from a feature map or read from file.
/// `valid` is false for the flagged zero descriptor (unnormalizable pooling
/// result); cosine distance against it is defined as maximal.
struct Descriptor {
    Eigen::VectorXf values;
    bool valid = false;

    int dim() const { return static_cast<int>(values.size()); }

    /// L2-normalizes `raw`; a (near-)zero vector yields the flagged zero descriptor.
    static Descriptor normalized_from(Eigen::VectorXf raw);
};

/// One detector output box for one frame.
struct Detection {
    int frame = 0; // 1-based
    BBox bbox;
    double confidence = 0.0; // in [0, 1]
    int class_id = 1;
    std::optional<Descriptor> descriptor;
};

} // namespace litetrack
