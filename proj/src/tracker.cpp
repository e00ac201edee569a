#include <litetrack/tracker.hpp>

#include <litetrack/errors.hpp>
#include <litetrack/lite_extractor.hpp>

#include <algorithm>
#include <stdexcept>

namespace litetrack {

std::string to_string(TrackerVariant v) {
    switch (v) {
    case TrackerVariant::kSort:
        return "sort";
    case TrackerVariant::kDeepSort:
        return "deepsort";
    case TrackerVariant::kLiteDeepSort:
        return "lite-deepsort";
    }
    return "unknown";
}

TrackerVariant variant_from_string(const std::string& name) {
    if (name == "sort") {
        return TrackerVariant::kSort;
    }
    if (name == "deepsort") {
        return TrackerVariant::kDeepSort;
    }
    if (name == "lite-deepsort") {
        return TrackerVariant::kLiteDeepSort;
    }
    throw ConfigError("unknown tracker variant: " + name);
}

void TrackerConfig::validate() const {
    if (n_init <= 0 || max_age <= 0 || gallery_budget <= 0) {
        throw ConfigError("tracker config: n_init, max_age, gallery_budget must be positive");
    }
    if (min_confidence < 0.0 || min_confidence > 1.0) {
        throw ConfigError("tracker config: min_confidence must be in [0,1]");
    }
    if (max_iou_distance <= 0.0 || max_cosine_distance <= 0.0 || gating_threshold <= 0.0) {
        throw ConfigError("tracker config: distance thresholds must be positive");
    }
}

std::vector<std::pair<std::string, std::string>> TrackerConfig::snapshot() const {
    auto num = [](double v) {
        std::string s = std::to_string(v);
        return s;
    };
    return {
        {"n_init", std::to_string(n_init)},
        {"max_age", std::to_string(max_age)},
        {"min_confidence", num(min_confidence)},
        {"max_iou_distance", num(max_iou_distance)},
        {"max_cosine_distance", num(max_cosine_distance)},
        {"gallery_budget", std::to_string(gallery_budget)},
        {"gating_threshold", num(gating_threshold)},
        {"output_raw_detections", output_raw_detections ? "1" : "0"},
    };
}

MultiObjectTracker::MultiObjectTracker(TrackerVariant variant, TrackerConfig config)
    : variant_(variant), config_(config), kf_(config.noise) {
    config_.validate();
}

DescriptorMode MultiObjectTracker::descriptor_mode() const {
    switch (variant_) {
    case TrackerVariant::kSort:
        return DescriptorMode::kNone;
    case TrackerVariant::kDeepSort:
        return DescriptorMode::kFromSource;
    case TrackerVariant::kLiteDeepSort:
        return DescriptorMode::kFromFeatureMap;
    }
    return DescriptorMode::kNone;
}

std::vector<Detection> MultiObjectTracker::filter_detections(std::vector<Detection> dets) const {
    std::erase_if(dets, [this](const Detection& d) {
        return d.confidence < config_.min_confidence || !d.bbox.has_positive_extent();
    });
    return dets;
}

std::vector<TrackOutput> MultiObjectTracker::step(int frame,
                                                  const std::vector<Detection>& detections,
                                                  const FeatureMap* feature_map) {
    std::vector<Detection> dets = filter_detections(detections);
    if (variant_ == TrackerVariant::kLiteDeepSort) {
        if (feature_map == nullptr) {
            throw ConfigError("lite-deepsort requires a feature map per frame");
        }
        const std::vector<Descriptor> descs = lite::extract_batch(*feature_map, dets);
        for (std::size_t i = 0; i < dets.size(); ++i) {
            dets[i].descriptor = descs[i];
        }
    }
    return step_prepared(frame, dets);
}

association::MatchResult MultiObjectTracker::associate(const std::vector<Detection>& dets) const {
    const int num_dets = static_cast<int>(dets.size());

    if (variant_ == TrackerVariant::kSort) {
        std::vector<BBox> track_boxes;
        track_boxes.reserve(tracks_.size());
        for (const Track& t : tracks_) {
            track_boxes.push_back(t.to_tlwh());
        }
        std::vector<BBox> det_boxes;
        det_boxes.reserve(dets.size());
        for (const Detection& d : dets) {
            det_boxes.push_back(d.bbox);
        }
        return association::iou_match(track_boxes, det_boxes, config_.max_iou_distance);
    }

    // appearance cascade over confirmed tracks, then IoU fallback
    std::vector<int> confirmed;
    std::vector<int> unconfirmed;
    for (std::size_t t = 0; t < tracks_.size(); ++t) {
        (tracks_[t].is_confirmed() ? confirmed : unconfirmed).push_back(static_cast<int>(t));
    }

    std::vector<Descriptor> det_descriptors;
    std::vector<Xyah> det_xyah;
    det_descriptors.reserve(dets.size());
    det_xyah.reserve(dets.size());
    for (const Detection& d : dets) {
        det_descriptors.push_back(*d.descriptor);
        det_xyah.push_back(tlwh_to_xyah(d.bbox));
    }

    const auto cost_fn = [&](const std::vector<int>& sub_tracks,
                             const std::vector<int>& sub_dets) {
        Eigen::MatrixXd appearance(static_cast<Eigen::Index>(sub_tracks.size()),
                                   static_cast<Eigen::Index>(sub_dets.size()));
        Eigen::MatrixXd gating(appearance.rows(), appearance.cols());
        std::vector<Descriptor> cands;
        std::vector<Xyah> cand_xyah;
        cands.reserve(sub_dets.size());
        cand_xyah.reserve(sub_dets.size());
        for (int d : sub_dets) {
            cands.push_back(det_descriptors[d]);
            cand_xyah.push_back(det_xyah[d]);
        }
        for (std::size_t i = 0; i < sub_tracks.size(); ++i) {
            const Track& trk = tracks_[confirmed[sub_tracks[i]]];
            appearance.row(static_cast<Eigen::Index>(i)) =
                association::cosine_cost(trk.gallery(), cands);
            const std::vector<double> dist = kf_.gating_distance(trk.kalman(), cand_xyah);
            for (std::size_t j = 0; j < dist.size(); ++j) {
                gating(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = dist[j];
            }
        }
        return association::gated_cost(appearance, gating, config_.gating_threshold);
    };

    std::vector<int> confirmed_tsu;
    confirmed_tsu.reserve(confirmed.size());
    for (int t : confirmed) {
        confirmed_tsu.push_back(tracks_[t].time_since_update());
    }
    const association::MatchResult cascade = association::matching_cascade(
        cost_fn, config_.max_cosine_distance, config_.max_age, confirmed_tsu, num_dets);

    association::MatchResult out;
    for (const auto& [ct, d] : cascade.matches) {
        out.matches.emplace_back(confirmed[ct], d);
    }

    // unconfirmed tracks and just-missed cascade leftovers fall back to IoU
    std::vector<int> iou_track_ids = unconfirmed;
    for (int ct : cascade.unmatched_tracks) {
        const int t = confirmed[ct];
        if (tracks_[t].time_since_update() == 1) {
            iou_track_ids.push_back(t);
        } else {
            out.unmatched_tracks.push_back(t);
        }
    }
    std::sort(iou_track_ids.begin(), iou_track_ids.end());

    std::vector<BBox> iou_track_boxes;
    iou_track_boxes.reserve(iou_track_ids.size());
    for (int t : iou_track_ids) {
        iou_track_boxes.push_back(tracks_[t].to_tlwh());
    }
    std::vector<BBox> remaining_boxes;
    remaining_boxes.reserve(cascade.unmatched_detections.size());
    for (int d : cascade.unmatched_detections) {
        remaining_boxes.push_back(dets[d].bbox);
    }
    const association::MatchResult fallback =
        association::iou_match(iou_track_boxes, remaining_boxes, config_.max_iou_distance);

    for (const auto& [ti, di] : fallback.matches) {
        out.matches.emplace_back(iou_track_ids[ti], cascade.unmatched_detections[di]);
    }
    for (int ti : fallback.unmatched_tracks) {
        out.unmatched_tracks.push_back(iou_track_ids[ti]);
    }
    for (int di : fallback.unmatched_detections) {
        out.unmatched_detections.push_back(cascade.unmatched_detections[di]);
    }
    return out;
}

std::vector<TrackOutput> MultiObjectTracker::step_prepared(int frame,
                                                           const std::vector<Detection>& dets) {
    if (frame <= last_frame_) {
        throw std::runtime_error("tracker: frame indices must be strictly increasing (got " +
                                 std::to_string(frame) + " after " +
                                 std::to_string(last_frame_) + ")");
    }
    last_frame_ = frame;

    if (variant_ != TrackerVariant::kSort) {
        for (const Detection& d : dets) {
            if (!d.descriptor) {
                throw ConfigError(to_string(variant_) +
                                  " requires a descriptor per detection");
            }
        }
    }

    for (Track& t : tracks_) {
        t.predict(kf_);
    }

    const association::MatchResult match = associate(dets);

    std::vector<int> matched_det_of_track(tracks_.size(), -1);
    for (const auto& [t, d] : match.matches) {
        tracks_[t].update(kf_, dets[d], config_.n_init);
        matched_det_of_track[t] = d;
    }
    for (int t : match.unmatched_tracks) {
        tracks_[t].mark_missed(config_.max_age);
    }
    for (int d : match.unmatched_detections) {
        tracks_.emplace_back(next_id_++, kf_, dets[d], config_.gallery_budget,
                             config_.n_init);
    }

    std::vector<TrackOutput> outputs;
    for (std::size_t t = 0; t < tracks_.size(); ++t) {
        const Track& trk = tracks_[t];
        if (!trk.is_confirmed() || trk.time_since_update() != 0) {
            continue;
        }
        BBox box = trk.to_tlwh();
        if (config_.output_raw_detections && t < matched_det_of_track.size() &&
            matched_det_of_track[t] >= 0) {
            box = dets[matched_det_of_track[t]].bbox;
        }
        outputs.push_back(TrackOutput{trk.id(), box, trk.last_confidence()});
    }

    std::erase_if(tracks_, [](const Track& t) { return t.is_deleted(); });
    return outputs;
}

void MultiObjectTracker::reset() {
    tracks_.clear();
    next_id_ = 1;
    last_frame_ = 0;
}

} // namespace litetrack
