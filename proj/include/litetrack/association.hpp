#pragma once

#include <litetrack/assignment.hpp>
#include <litetrack/geometry.hpp>

#include <Eigen/Core>
#include <deque>
#include <functional>
#include <utility>
#include <vector>

namespace litetrack {

/// Ring buffer of appearance descriptors for one track.
class Gallery {
public:
    explicit Gallery(std::size_t budget) : budget_(budget) {}

    void add(Descriptor d) {
        entries_.push_back(std::move(d));
        while (entries_.size() > budget_) {
            entries_.pop_front();
        }
    }

    const std::deque<Descriptor>& entries() const { return entries_; }
    bool empty() const { return entries_.empty(); }
    std::size_t budget() const { return budget_; }

private:
    std::size_t budget_;
    std::deque<Descriptor> entries_;
};

namespace association {

/// Cost written into gated or undefined entries. Above any usable cap, so the
/// assignment solver treats such pairs as forbidden.
inline constexpr double kInfeasibleCost = 1e5;

/// Maximal cosine distance: flagged zero descriptors and empty galleries.
inline constexpr double kMaxCosineCost = 2.0;

/// Per-candidate cost: min over gallery entries of (1 - <g, c>).
Eigen::RowVectorXd cosine_cost(const Gallery& gallery,
                               const std::vector<Descriptor>& candidates);

/// Replaces entries whose gating distance exceeds `gate` with kInfeasibleCost;
/// kept entries are unchanged. Throws std::invalid_argument on shape mismatch.
Eigen::MatrixXd gated_cost(const Eigen::MatrixXd& appearance_cost,
                           const Eigen::MatrixXd& gating, double gate);

struct MatchResult {
    std::vector<std::pair<int, int>> matches; // (track index, detection index)
    std::vector<int> unmatched_tracks;
    std::vector<int> unmatched_detections;
};

/// Cost matrix builder over subsets: (track indices, detection indices) ->
/// |tracks| x |detections| costs.
using CostFn = std::function<Eigen::MatrixXd(const std::vector<int>&, const std::vector<int>&)>;

/// DeepSORT-style cascade: one assignment round per age level 1..max_age_levels,
/// restricted to tracks whose time_since_update equals the level, over the
/// detections still unmatched. Recently updated tracks therefore get priority.
MatchResult matching_cascade(const CostFn& cost_fn, double cap, int max_age_levels,
                             const std::vector<int>& track_time_since_update,
                             int num_detections);

/// Assignment over cost 1 - IoU with cap max_iou_distance.
MatchResult iou_match(const std::vector<BBox>& track_boxes,
                      const std::vector<BBox>& detection_boxes, double max_iou_distance);

} // namespace association
} // namespace litetrack
