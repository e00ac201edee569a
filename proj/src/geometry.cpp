#include <litetrack/geometry.hpp>

#include <algorithm>
#include <cmath>

namespace litetrack {

Xyah tlwh_to_xyah(const BBox& b) {
    return Xyah{b.x + 0.5 * b.w, b.y + 0.5 * b.h, b.w / b.h, b.h};
}

BBox xyah_to_tlwh(const Xyah& m) {
    const double w = m.aspect * m.height;
    return BBox{m.cx - 0.5 * w, m.cy - 0.5 * m.height, w, m.height};
}

double iou(const BBox& a, const BBox& b) {
    const double ix = std::max(0.0, std::min(a.right(), b.right()) - std::max(a.x, b.x));
    const double iy = std::max(0.0, std::min(a.bottom(), b.bottom()) - std::max(a.y, b.y));
    const double inter = ix * iy;
    if (inter <= 0.0) {
        return 0.0;
    }
    return inter / (a.area() + b.area() - inter);
}

Descriptor Descriptor::normalized_from(Eigen::VectorXf raw) {
    Descriptor d;
    const double norm = raw.template cast<double>().norm();
    if (!(norm > 1e-12) || !std::isfinite(norm)) {
        d.values = Eigen::VectorXf::Zero(raw.size());
        d.valid = false;
        return d;
    }
    d.values = (raw.template cast<double>() / norm).template cast<float>();
    d.valid = true;
    return d;
}

} // namespace litetrack
