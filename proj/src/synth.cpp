#include <litetrack/synth.hpp>

#include <litetrack/errors.hpp>
#include <litetrack/lite_extractor.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>

namespace litetrack::synth {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seeded RNG with a platform-independent gaussian (Box-Muller over the
/// standardized mt19937_64 stream).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    double gaussian() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 1e-300) {
            u1 = uniform();
        }
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

private:
    std::mt19937_64 eng_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

constexpr std::uint64_t kMapStream = 0xfeedface01234567ULL;
constexpr std::uint64_t kDescStream = 0xabcdef9876543210ULL;

/// k unit vectors in d dims with pairwise inner product exactly 1 - gap,
/// embedded in a seeded random orthonormal frame. One extra orthogonal vector
/// serves as the background filler.
struct AppearanceModel {
    std::vector<Eigen::VectorXf> identities;
    Eigen::VectorXf background;
};

AppearanceModel build_appearance(int k, int d, double gap, Rng& rng) {
    const int frame_size = k + 1;
    if (frame_size > d) {
        throw ConfigError("synth: channels must be >= num_targets + 1");
    }
    // random orthonormal frame via Gram-Schmidt
    std::vector<Eigen::VectorXd> q;
    q.reserve(frame_size);
    while (static_cast<int>(q.size()) < frame_size) {
        Eigen::VectorXd v(d);
        for (int i = 0; i < d; ++i) {
            v(i) = rng.gaussian();
        }
        for (const Eigen::VectorXd& prev : q) {
            v -= prev.dot(v) * prev;
        }
        const double n = v.norm();
        if (n < 1e-8) {
            continue;
        }
        q.push_back(v / n);
    }

    const double rho = 1.0 - gap;
    if (k >= 2) {
        const double rho_min = -1.0 / static_cast<double>(k - 1);
        if (rho < rho_min - 1e-12 || rho > 1.0) {
            throw ConfigError("synth: appearance gap " + std::to_string(gap) +
                              " infeasible for " + std::to_string(k) + " targets");
        }
    }
    // Cholesky of the k x k Gram matrix (1-rho) I + rho J
    Eigen::MatrixXd gram = Eigen::MatrixXd::Constant(k, k, rho);
    gram.diagonal().setOnes();
    Eigen::MatrixXd lower = Eigen::MatrixXd::Zero(k, k);
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j <= i; ++j) {
            double s = gram(i, j);
            for (int m = 0; m < j; ++m) {
                s -= lower(i, m) * lower(j, m);
            }
            if (i == j) {
                if (s < 1e-12) {
                    throw ConfigError("synth: appearance gap numerically infeasible");
                }
                lower(i, i) = std::sqrt(s);
            } else {
                lower(i, j) = s / lower(j, j);
            }
        }
    }

    AppearanceModel model;
    model.identities.reserve(k);
    for (int i = 0; i < k; ++i) {
        Eigen::VectorXd v = Eigen::VectorXd::Zero(d);
        for (int j = 0; j <= i; ++j) {
            v += lower(i, j) * q[j];
        }
        model.identities.push_back(v.cast<float>());
    }
    model.background = q[k].cast<float>();
    return model;
}

struct Path {
    // center position per 1-based frame
    std::vector<double> cx;
    std::vector<double> cy;
};

std::vector<Path> build_paths(const SynthConfig& cfg) {
    const int k = cfg.num_targets;
    const int frames = cfg.num_frames;
    const double w = cfg.image_width;
    const double h = cfg.image_height;
    const double mx = cfg.box_width / 2.0 + 4.0;
    const double my = cfg.box_height / 2.0 + 4.0;
    const int cf = cfg.resolved_crossing_frame();

    std::vector<Path> paths(k);
    for (Path& p : paths) {
        p.cx.resize(frames + 1, 0.0);
        p.cy.resize(frames + 1, 0.0);
    }

    switch (cfg.kind) {
    case TrajectoryKind::kLinear: {
        for (int i = 0; i < k; ++i) {
            const double row =
                my + (h - 2.0 * my) * (static_cast<double>(i) + 0.5) / k;
            for (int f = 1; f <= frames; ++f) {
                const double t = frames > 1 ? static_cast<double>(f - 1) / (frames - 1) : 0.0;
                paths[i].cx[f] = mx + (w - 2.0 * mx) * t;
                paths[i].cy[f] = row;
            }
        }
        break;
    }
    case TrajectoryKind::kCrossing: {
        // shallow symmetric paths through the image center at the crossing frame
        const double cx0 = w / 2.0;
        const double cy0 = h / 2.0;
        const double span = std::max(cf - 1, frames - cf);
        const double speed = std::min(1.6, (w / 2.0 - mx - 2.0) / std::max(span, 1.0));
        for (int i = 0; i < k; ++i) {
            const double side = (i % 2 == 0) ? 1.0 : -1.0;
            const double slope = 0.12 + 0.04 * static_cast<double>(i / 2);
            Eigen::Vector2d dir(side, slope);
            dir.normalize();
            for (int f = 1; f <= frames; ++f) {
                paths[i].cx[f] = cx0 + dir(0) * speed * (f - cf);
                paths[i].cy[f] = cy0 + dir(1) * speed * (f - cf);
            }
        }
        break;
    }
    case TrajectoryKind::kOccluding: {
        // target 0 static in front; the rest sweep through it horizontally
        for (int f = 1; f <= frames; ++f) {
            paths[0].cx[f] = w / 2.0;
            paths[0].cy[f] = h / 2.0;
        }
        for (int i = 1; i < k; ++i) {
            const double side = (i % 2 == 1) ? 1.0 : -1.0;
            const int cf_i = std::min(frames, cf + (i - 1) * 8);
            const double span = std::max(cf_i - 1, frames - cf_i);
            const double speed = std::min(1.6, (w / 2.0 - mx - 2.0) / std::max(span, 1.0));
            for (int f = 1; f <= frames; ++f) {
                paths[i].cx[f] = w / 2.0 + side * speed * (f - cf_i);
                paths[i].cy[f] = h / 2.0;
            }
        }
        break;
    }
    }

    // keep paths inside the frame
    for (Path& p : paths) {
        for (int f = 1; f <= frames; ++f) {
            p.cx[f] = std::clamp(p.cx[f], mx, w - mx);
            p.cy[f] = std::clamp(p.cy[f], my, h - my);
        }
    }
    return paths;
}

/// Fraction of `own` covered by `front`.
double covered_fraction(const BBox& own, const BBox& front) {
    const double ix =
        std::max(0.0, std::min(own.right(), front.right()) - std::max(own.x, front.x));
    const double iy =
        std::max(0.0, std::min(own.bottom(), front.bottom()) - std::max(own.y, front.y));
    return (ix * iy) / own.area();
}

} // namespace

std::string to_string(TrajectoryKind k) {
    switch (k) {
    case TrajectoryKind::kLinear:
        return "linear";
    case TrajectoryKind::kCrossing:
        return "crossing";
    case TrajectoryKind::kOccluding:
        return "occluding";
    }
    return "unknown";
}

TrajectoryKind trajectory_from_string(const std::string& name) {
    if (name == "linear") {
        return TrajectoryKind::kLinear;
    }
    if (name == "crossing") {
        return TrajectoryKind::kCrossing;
    }
    if (name == "occluding") {
        return TrajectoryKind::kOccluding;
    }
    throw ConfigError("unknown trajectory kind: " + name);
}

void SynthConfig::validate() const {
    if (num_targets < 1) {
        throw ConfigError("synth: num_targets must be >= 1");
    }
    if (num_frames < 2) {
        throw ConfigError("synth: num_frames must be >= 2");
    }
    if (appearance_gap < 0.0 || appearance_gap > 2.0) {
        throw ConfigError("synth: appearance_gap must be in [0, 2]");
    }
    if (image_width < 32 || image_height < 32) {
        throw ConfigError("synth: image must be at least 32x32");
    }
    if (channels < 1 || stride < 1) {
        throw ConfigError("synth: channels and stride must be positive");
    }
    if (box_width < 4.0 || box_height < 4.0) {
        throw ConfigError("synth: boxes must be at least 4px");
    }
    if (box_width + 8.0 > image_width || box_height + 8.0 > image_height) {
        throw ConfigError("synth: boxes must fit inside the image with margin");
    }
    if (box_noise_std < 0.0 || descriptor_noise_std < 0.0) {
        throw ConfigError("synth: noise stds must be nonnegative");
    }
    if (visibility_floor < 0.0 || visibility_floor > 1.0) {
        throw ConfigError("synth: visibility_floor must be in [0, 1]");
    }
    if (clutter_per_frame < 0) {
        throw ConfigError("synth: clutter_per_frame must be nonnegative");
    }
}

SynthSource::SynthSource(const SynthConfig& cfg, bool with_feature_maps)
    : cfg_(cfg), with_feature_maps_(with_feature_maps) {
    cfg_.validate();
    const int k = cfg_.num_targets;
    const int frames = cfg_.num_frames;

    meta_.name = cfg_.name;
    meta_.image_width = cfg_.image_width;
    meta_.image_height = cfg_.image_height;
    meta_.frame_rate = cfg_.frame_rate;
    meta_.num_frames = frames;

    Rng rng(splitmix64(cfg_.seed));
    const AppearanceModel appearance =
        build_appearance(k, cfg_.channels, cfg_.appearance_gap, rng);
    identities_ = appearance.identities;
    background_ = appearance.background;

    const std::vector<Path> paths = build_paths(cfg_);

    true_boxes_.assign(frames, std::vector<BBox>(k));
    detections_.assign(frames, {});
    detection_target_.assign(frames, {});

    for (int f = 1; f <= frames; ++f) {
        for (int i = 0; i < k; ++i) {
            true_boxes_[f - 1][i] =
                BBox{paths[i].cx[f] - cfg_.box_width / 2.0,
                     paths[i].cy[f] - cfg_.box_height / 2.0, cfg_.box_width,
                     cfg_.box_height};
        }
    }

    // reject configurations whose targets already overlap in frame 1
    for (int i = 0; i < k; ++i) {
        for (int j = i + 1; j < k; ++j) {
            if (iou(true_boxes_[0][i], true_boxes_[0][j]) > 0.0) {
                throw ConfigError("synth: targets overlap at spawn");
            }
        }
    }

    for (int f = 1; f <= frames; ++f) {
        for (int i = 0; i < k; ++i) {
            const BBox& box = true_boxes_[f - 1][i];
            double cover = 0.0;
            for (int j = 0; j < i; ++j) { // lower index is in front
                cover = std::max(cover, covered_fraction(box, true_boxes_[f - 1][j]));
            }
            const double visibility = 1.0 - cover;
            gt_.push_back(io::GtEntry{f, i + 1, box, true, 1, visibility});

            if (visibility < cfg_.visibility_floor) {
                continue; // occluded: detector misses it
            }
            Detection det;
            det.frame = f;
            det.bbox = box;
            det.bbox.x += cfg_.box_noise_std * rng.gaussian();
            det.bbox.y += cfg_.box_noise_std * rng.gaussian();
            det.bbox.w = std::max(4.0, det.bbox.w + 0.5 * cfg_.box_noise_std * rng.gaussian());
            det.bbox.h = std::max(4.0, det.bbox.h + 0.5 * cfg_.box_noise_std * rng.gaussian());
            det.confidence = std::min(1.0, 0.90 + 0.09 * visibility);
            detections_[f - 1].push_back(std::move(det));
            detection_target_[f - 1].push_back(i);
        }
        for (int c = 0; c < cfg_.clutter_per_frame; ++c) {
            Detection det;
            det.frame = f;
            const double bw = cfg_.box_width * rng.uniform(0.8, 1.2);
            const double bh = cfg_.box_height * rng.uniform(0.8, 1.2);
            det.bbox = BBox{rng.uniform(0.0, cfg_.image_width - bw),
                            rng.uniform(0.0, cfg_.image_height - bh), bw, bh};
            det.confidence =
                rng.uniform(cfg_.clutter_confidence_min, cfg_.clutter_confidence_max);
            detections_[f - 1].push_back(std::move(det));
            detection_target_[f - 1].push_back(-1);
        }
    }
}

FeatureMap SynthSource::build_feature_map(int frame) const {
    const int cells_h = (cfg_.image_height + cfg_.stride - 1) / cfg_.stride;
    const int cells_w = (cfg_.image_width + cfg_.stride - 1) / cfg_.stride;
    const int channels = cfg_.channels;

    std::vector<float> data(static_cast<std::size_t>(channels) * cells_h * cells_w);
    FeatureMap fm(frame, channels, cells_h, cells_w, cfg_.stride, std::move(data));
    for (int c = 0; c < channels; ++c) {
        const float v = background_(c);
        for (int row = 0; row < cells_h; ++row) {
            for (int col = 0; col < cells_w; ++col) {
                fm.at(c, row, col) = v;
            }
        }
    }

    Rng rng(splitmix64(cfg_.seed ^ kMapStream ^ (static_cast<std::uint64_t>(frame) << 20)));
    // paint back to front so front targets overwrite occluded ones
    for (int i = cfg_.num_targets - 1; i >= 0; --i) {
        const CropRegion region = lite::map_box(true_boxes_[frame - 1][i], fm);
        for (int row = region.top; row < region.bottom; ++row) {
            for (int col = region.left; col < region.right; ++col) {
                for (int c = 0; c < cfg_.channels; ++c) {
                    fm.at(c, row, col) = identities_[i](c) +
                        static_cast<float>(cfg_.descriptor_noise_std * rng.gaussian());
                }
            }
        }
    }
    return fm;
}

std::vector<Descriptor> SynthSource::external_descriptors(int frame) const {
    Rng rng(splitmix64(cfg_.seed ^ kDescStream ^ (static_cast<std::uint64_t>(frame) << 20)));
    const std::vector<int>& owners = detection_target_[frame - 1];
    std::vector<Descriptor> out;
    out.reserve(owners.size());
    for (int owner : owners) {
        Eigen::VectorXf v(cfg_.channels);
        if (owner >= 0) {
            for (int c = 0; c < cfg_.channels; ++c) {
                v(c) = identities_[owner](c) +
                       static_cast<float>(cfg_.descriptor_noise_std * rng.gaussian());
            }
        } else {
            for (int c = 0; c < cfg_.channels; ++c) {
                v(c) = static_cast<float>(rng.gaussian());
            }
        }
        out.push_back(Descriptor::normalized_from(std::move(v)));
    }
    return out;
}

std::optional<FrameBatch> SynthSource::next() {
    if (cursor_ > meta_.num_frames) {
        return std::nullopt;
    }
    FrameBatch batch;
    batch.frame_index = cursor_;
    batch.detections = detections_[cursor_ - 1];
    if (with_feature_maps_) {
        batch.feature_map = build_feature_map(cursor_);
    }
    ++cursor_;
    return batch;
}

void SynthSource::attach_descriptors(FrameBatch& batch) {
    const std::vector<Descriptor> descs = external_descriptors(batch.frame_index);
    for (std::size_t i = 0; i < batch.detections.size() && i < descs.size(); ++i) {
        batch.detections[i].descriptor = descs[i];
    }
}

Scenario make_scenario(const SynthConfig& cfg, bool with_feature_maps) {
    Scenario sc;
    sc.source = std::make_shared<SynthSource>(cfg, with_feature_maps);
    sc.meta = sc.source->meta();
    sc.gt = sc.source->gt();
    return sc;
}

void write_scenario(const SynthConfig& cfg, const std::filesystem::path& dir) {
    const Scenario sc = make_scenario(cfg, true);
    std::filesystem::create_directories(dir);

    {
        std::ofstream out(dir / "seqinfo.ini");
        if (!out) {
            throw InputError("cannot create " + (dir / "seqinfo.ini").string());
        }
        out << "[Sequence]\n"
            << "name=" << sc.meta.name << "\n"
            << "imDir=img1\n"
            << "frameRate=" << sc.meta.frame_rate << "\n"
            << "seqLength=" << sc.meta.num_frames << "\n"
            << "imWidth=" << sc.meta.image_width << "\n"
            << "imHeight=" << sc.meta.image_height << "\n"
            << "imExt=.jpg\n";
    }

    io::write_gt(dir / "gt" / "gt.txt", sc.gt);

    std::vector<io::DetEntry> det_rows;
    for (int f = 1; f <= sc.meta.num_frames; ++f) {
        for (const Detection& d : sc.source->detections(f)) {
            det_rows.push_back(io::DetEntry{f, d.bbox, d.confidence});
        }
    }
    io::write_det(dir / "det" / "det.txt", det_rows);

    for (int f = 1; f <= sc.meta.num_frames; ++f) {
        io::write_feature_map(dir / "features" / io::feature_map_filename(f),
                              sc.source->build_feature_map(f));
        io::write_descriptors(dir / "descriptors" / io::descriptor_filename(f), f,
                              sc.source->external_descriptors(f));
    }
}

} // namespace litetrack::synth
