#include <litetrack/association.hpp>

#include <algorithm>
#include <stdexcept>

namespace litetrack::association {
namespace {

MatchResult from_assignment(const assignment::AssignmentResult& res,
                            const std::vector<int>& track_ids,
                            const std::vector<int>& det_ids) {
    MatchResult out;
    for (const auto& [r, c] : res.matches) {
        out.matches.emplace_back(track_ids[r], det_ids[c]);
    }
    for (int r : res.unmatched_rows) {
        out.unmatched_tracks.push_back(track_ids[r]);
    }
    for (int c : res.unmatched_cols) {
        out.unmatched_detections.push_back(det_ids[c]);
    }
    return out;
}

} // namespace

Eigen::RowVectorXd cosine_cost(const Gallery& gallery,
                               const std::vector<Descriptor>& candidates) {
    Eigen::RowVectorXd costs =
        Eigen::RowVectorXd::Constant(static_cast<Eigen::Index>(candidates.size()),
                                     kMaxCosineCost);
    if (gallery.empty()) {
        return costs;
    }
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        const Descriptor& cand = candidates[i];
        if (!cand.valid) {
            continue; // flagged zero descriptor: maximal cost
        }
        double best = kMaxCosineCost;
        for (const Descriptor& entry : gallery.entries()) {
            if (!entry.valid) {
                continue;
            }
            const double dot =
                entry.values.cast<double>().dot(cand.values.cast<double>());
            best = std::min(best, 1.0 - dot);
        }
        costs(static_cast<Eigen::Index>(i)) = best;
    }
    return costs;
}

Eigen::MatrixXd gated_cost(const Eigen::MatrixXd& appearance_cost,
                           const Eigen::MatrixXd& gating, double gate) {
    if (appearance_cost.rows() != gating.rows() || appearance_cost.cols() != gating.cols()) {
        throw std::invalid_argument("gated_cost: shape mismatch");
    }
    Eigen::MatrixXd out = appearance_cost;
    for (Eigen::Index r = 0; r < out.rows(); ++r) {
        for (Eigen::Index c = 0; c < out.cols(); ++c) {
            if (gating(r, c) > gate) {
                out(r, c) = kInfeasibleCost;
            }
        }
    }
    return out;
}

MatchResult matching_cascade(const CostFn& cost_fn, double cap, int max_age_levels,
                             const std::vector<int>& track_time_since_update,
                             int num_detections) {
    MatchResult out;
    std::vector<int> remaining_dets(num_detections);
    for (int i = 0; i < num_detections; ++i) {
        remaining_dets[i] = i;
    }
    std::vector<char> track_matched(track_time_since_update.size(), 0);

    for (int level = 1; level <= max_age_levels && !remaining_dets.empty(); ++level) {
        std::vector<int> level_tracks;
        for (std::size_t t = 0; t < track_time_since_update.size(); ++t) {
            if (track_time_since_update[t] == level) {
                level_tracks.push_back(static_cast<int>(t));
            }
        }
        if (level_tracks.empty()) {
            continue;
        }
        const Eigen::MatrixXd cost = cost_fn(level_tracks, remaining_dets);
        const assignment::AssignmentResult res = assignment::solve(cost, cap);
        std::vector<int> still_remaining;
        std::vector<char> det_taken(remaining_dets.size(), 0);
        for (const auto& [r, c] : res.matches) {
            out.matches.emplace_back(level_tracks[r], remaining_dets[c]);
            track_matched[level_tracks[r]] = 1;
            det_taken[c] = 1;
        }
        for (std::size_t c = 0; c < remaining_dets.size(); ++c) {
            if (!det_taken[c]) {
                still_remaining.push_back(remaining_dets[c]);
            }
        }
        remaining_dets = std::move(still_remaining);
    }

    for (std::size_t t = 0; t < track_time_since_update.size(); ++t) {
        if (!track_matched[t]) {
            out.unmatched_tracks.push_back(static_cast<int>(t));
        }
    }
    out.unmatched_detections = remaining_dets;
    return out;
}

MatchResult iou_match(const std::vector<BBox>& track_boxes,
                      const std::vector<BBox>& detection_boxes, double max_iou_distance) {
    Eigen::MatrixXd cost(static_cast<Eigen::Index>(track_boxes.size()),
                         static_cast<Eigen::Index>(detection_boxes.size()));
    for (std::size_t t = 0; t < track_boxes.size(); ++t) {
        for (std::size_t d = 0; d < detection_boxes.size(); ++d) {
            cost(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(d)) =
                1.0 - iou(track_boxes[t], detection_boxes[d]);
        }
    }
    std::vector<int> track_ids(track_boxes.size());
    std::vector<int> det_ids(detection_boxes.size());
    for (std::size_t i = 0; i < track_ids.size(); ++i) {
        track_ids[i] = static_cast<int>(i);
    }
    for (std::size_t i = 0; i < det_ids.size(); ++i) {
        det_ids[i] = static_cast<int>(i);
    }
    return from_assignment(assignment::solve(cost, max_iou_distance), track_ids, det_ids);
}

} // namespace litetrack::association
