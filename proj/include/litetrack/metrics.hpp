#pragma once

#include <litetrack/geometry.hpp>
#include <litetrack/mot_io.hpp>

#include <array>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace litetrack::metrics {

struct IdBox {
    int id = 0;
    BBox box;
};

/// frame -> boxes present in that frame (at most one box per id per frame).
using FrameBoxes = std::map<int, std::vector<IdBox>>;

struct PrepOptions {
    std::set<int> pedestrian_classes = {1};
    std::set<int> distractor_classes = {2, 7, 8, 12};
    double match_threshold = 0.5;
};

/// MOT-Challenge style preprocessing: predictions matched (IoU >= threshold)
/// to distractor-class ground truth are removed, then ground truth is reduced
/// to considered pedestrian entries.
struct EvalInput {
    FrameBoxes gt;
    FrameBoxes pred;
};
EvalInput prepare(const std::vector<io::GtEntry>& gt_rows,
                  const std::vector<io::ResultRow>& pred_rows,
                  const PrepOptions& opts = {});

FrameBoxes boxes_from_results(const std::vector<io::ResultRow>& rows);

struct ClearResult {
    long long fp = 0;
    long long fn = 0;
    long long idsw = 0;
    long long gt_total = 0;
    double mota = 0.0;
};

/// Per-frame Hungarian matching on IoU >= threshold with the MOT-Challenge
/// continuity preference (a pair matched in the previous step is kept when
/// still eligible). Throws InputError when the ground truth is empty.
ClearResult clear_metrics(const FrameBoxes& gt, const FrameBoxes& pred,
                          double iou_threshold = 0.5);

long long id_switches(const FrameBoxes& gt, const FrameBoxes& pred,
                      double iou_threshold = 0.5);

struct IdfResult {
    long long idtp = 0;
    long long idfp = 0;
    long long idfn = 0;
    double idf1 = 0.0;
};

/// Optimal global bijection between ground-truth and predicted identities
/// over per-frame IoU >= threshold overlap counts.
IdfResult idf1_metrics(const FrameBoxes& gt, const FrameBoxes& pred,
                       double iou_threshold = 0.5);

inline constexpr int kNumAlphas = 19; // 0.05, 0.10, ..., 0.95

struct HotaResult {
    double hota = 0.0;
    double deta = 0.0;
    double assa = 0.0;
    std::array<double, kNumAlphas> alpha{};
    std::array<long long, kNumAlphas> tp{};
    std::array<long long, kNumAlphas> fn{};
    std::array<long long, kNumAlphas> fp{};
    std::array<double, kNumAlphas> ass_sum{}; // sum of pair Jaccard over TPs
    std::array<double, kNumAlphas> deta_alpha{};
    std::array<double, kNumAlphas> assa_alpha{};
    std::array<double, kNumAlphas> hota_alpha{};
};

HotaResult hota_metrics(const FrameBoxes& gt, const FrameBoxes& pred);

struct EvalReport {
    std::string sequence;
    HotaResult hota;
    ClearResult clear;
    IdfResult idf;
    double fps = 0.0; // filled when the evaluation follows a timed run
    bool has_fps = false;
};

EvalReport evaluate(const std::string& sequence, const FrameBoxes& gt,
                    const FrameBoxes& pred);

/// Pooled counts across sequences (summed counts, TP-weighted AssA), not an
/// average of per-sequence scores.
EvalReport pool(const std::vector<EvalReport>& reports);

/// CSV rows mirroring the usual benchmark table layout:
/// sequence,hota,idf1,mota,assa,deta,idsw,fps
void write_eval_csv(const std::filesystem::path& file,
                    const std::vector<EvalReport>& rows);
std::string format_eval_text(const EvalReport& report);

} // namespace litetrack::metrics
