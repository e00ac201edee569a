#include <litetrack/track.hpp>

namespace litetrack {

Track::Track(int id, const KalmanFilter& kf, const Detection& det,
             std::size_t gallery_budget, int n_init)
    : id_(id), gallery_(gallery_budget), last_confidence_(det.confidence) {
    kstate_ = kf.initiate(tlwh_to_xyah(det.bbox));
    if (det.descriptor) {
        gallery_.add(*det.descriptor);
    }
    if (hits_ >= n_init) {
        state_ = TrackState::Confirmed;
    }
}

void Track::predict(const KalmanFilter& kf) {
    kstate_ = kf.predict(kstate_);
    age_ += 1;
    time_since_update_ += 1;
}

void Track::update(const KalmanFilter& kf, const Detection& det, int n_init) {
    kstate_ = kf.update(kstate_, tlwh_to_xyah(det.bbox));
    if (det.descriptor) {
        gallery_.add(*det.descriptor);
    }
    hits_ += 1;
    time_since_update_ = 0;
    last_confidence_ = det.confidence;
    if (state_ == TrackState::Tentative && hits_ >= n_init) {
        state_ = TrackState::Confirmed;
    }
}

void Track::mark_missed(int max_age) {
    if (state_ == TrackState::Tentative) {
        state_ = TrackState::Deleted;
    } else if (time_since_update_ > max_age) {
        state_ = TrackState::Deleted;
    }
}

BBox Track::to_tlwh() const {
    return xyah_to_tlwh(to_xyah());
}

Xyah Track::to_xyah() const {
    return Xyah{kstate_.mean(0), kstate_.mean(1), kstate_.mean(2), kstate_.mean(3)};
}

} // namespace litetrack
