#pragma once

#include <litetrack/association.hpp>
#include <litetrack/geometry.hpp>
#include <litetrack/kalman_filter.hpp>

namespace litetrack {

enum class TrackState { Tentative, Confirmed, Deleted };

/// One tracked target: Kalman state, appearance gallery, lifecycle counters.
/// Transitions: Tentative -> Confirmed after n_init hits, Tentative -> Deleted
/// on the first miss, Confirmed -> Deleted once time_since_update > max_age.
class Track {
public:
    Track(int id, const KalmanFilter& kf, const Detection& det, std::size_t gallery_budget,
          int n_init);

    void predict(const KalmanFilter& kf);
    void update(const KalmanFilter& kf, const Detection& det, int n_init);
    void mark_missed(int max_age);

    int id() const { return id_; }
    TrackState state() const { return state_; }
    bool is_tentative() const { return state_ == TrackState::Tentative; }
    bool is_confirmed() const { return state_ == TrackState::Confirmed; }
    bool is_deleted() const { return state_ == TrackState::Deleted; }

    int hits() const { return hits_; }
    int age() const { return age_; }
    int time_since_update() const { return time_since_update_; }
    double last_confidence() const { return last_confidence_; }

    const KalmanState& kalman() const { return kstate_; }
    const Gallery& gallery() const { return gallery_; }

    /// Current estimate as a top-left/width/height box.
    BBox to_tlwh() const;
    Xyah to_xyah() const;

private:
    int id_;
    TrackState state_ = TrackState::Tentative;
    KalmanState kstate_;
    Gallery gallery_;
    int hits_ = 1;
    int age_ = 1;
    int time_since_update_ = 0;
    double last_confidence_ = 0.0;
};

} // namespace litetrack
