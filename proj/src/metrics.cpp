#include <litetrack/metrics.hpp>

#include <litetrack/assignment.hpp>
#include <litetrack/errors.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_map>

namespace litetrack::metrics {
namespace {

constexpr double kEps = 1e-9;

/// Max-weight complete matching: returns col per row (-1 = unmatched row).
std::vector<int> max_weight_match(const Eigen::MatrixXd& score) {
    if (score.rows() == 0 || score.cols() == 0) {
        return std::vector<int>(score.rows(), -1);
    }
    return assignment::solve_dense(-score);
}

long long count_boxes(const FrameBoxes& frames) {
    long long n = 0;
    for (const auto& [frame, boxes] : frames) {
        n += static_cast<long long>(boxes.size());
    }
    return n;
}

} // namespace

FrameBoxes boxes_from_results(const std::vector<io::ResultRow>& rows) {
    FrameBoxes out;
    for (const io::ResultRow& r : rows) {
        out[r.frame].push_back(IdBox{r.id, r.box});
    }
    return out;
}

EvalInput prepare(const std::vector<io::GtEntry>& gt_rows,
                  const std::vector<io::ResultRow>& pred_rows, const PrepOptions& opts) {
    std::map<int, std::vector<io::GtEntry>> gt_by_frame;
    for (const io::GtEntry& e : gt_rows) {
        gt_by_frame[e.frame].push_back(e);
    }
    FrameBoxes pred_all = boxes_from_results(pred_rows);

    EvalInput out;
    for (const auto& [frame, preds] : pred_all) {
        const auto git = gt_by_frame.find(frame);
        std::vector<char> drop(preds.size(), 0);
        if (git != gt_by_frame.end() && !git->second.empty() && !preds.empty()) {
            const auto& gts = git->second;
            Eigen::MatrixXd score(static_cast<Eigen::Index>(gts.size()),
                                  static_cast<Eigen::Index>(preds.size()));
            for (std::size_t g = 0; g < gts.size(); ++g) {
                for (std::size_t p = 0; p < preds.size(); ++p) {
                    const double s = iou(gts[g].box, preds[p].box);
                    score(g, p) = s >= opts.match_threshold - kEps ? s : 0.0;
                }
            }
            const std::vector<int> match = max_weight_match(score);
            for (std::size_t g = 0; g < gts.size(); ++g) {
                const int p = match[g];
                if (p < 0 || score(static_cast<Eigen::Index>(g), p) <= 0.0) {
                    continue;
                }
                if (opts.distractor_classes.count(gts[g].class_id) > 0) {
                    drop[p] = 1;
                }
            }
        }
        for (std::size_t p = 0; p < preds.size(); ++p) {
            if (!drop[p]) {
                out.pred[frame].push_back(preds[p]);
            }
        }
    }

    for (const auto& [frame, gts] : gt_by_frame) {
        for (const io::GtEntry& e : gts) {
            if (e.considered && opts.pedestrian_classes.count(e.class_id) > 0) {
                out.gt[frame].push_back(IdBox{e.id, e.box});
            }
        }
    }
    return out;
}

ClearResult clear_metrics(const FrameBoxes& gt, const FrameBoxes& pred,
                          double iou_threshold) {
    ClearResult res;
    res.gt_total = count_boxes(gt);
    if (res.gt_total == 0) {
        throw InputError("clear metrics: empty ground truth");
    }

    std::set<int> frames;
    for (const auto& [f, b] : gt) {
        frames.insert(f);
    }
    for (const auto& [f, b] : pred) {
        frames.insert(f);
    }

    std::unordered_map<int, int> last_match; // gt id -> most recent matched pred id
    static const std::vector<IdBox> kNoBoxes;
    for (int frame : frames) {
        const auto git = gt.find(frame);
        const auto pit = pred.find(frame);
        const std::vector<IdBox>& g = git != gt.end() ? git->second : kNoBoxes;
        const std::vector<IdBox>& p = pit != pred.end() ? pit->second : kNoBoxes;
        long long matched = 0;
        if (!g.empty() && !p.empty()) {
            Eigen::MatrixXd score(static_cast<Eigen::Index>(g.size()),
                                  static_cast<Eigen::Index>(p.size()));
            for (std::size_t i = 0; i < g.size(); ++i) {
                for (std::size_t j = 0; j < p.size(); ++j) {
                    const double s = iou(g[i].box, p[j].box);
                    double v = 0.0;
                    if (s >= iou_threshold - kEps) {
                        v = s;
                        const auto prev = last_match.find(g[i].id);
                        if (prev != last_match.end() && prev->second == p[j].id) {
                            v += 1000.0; // keep continuing pairs when still eligible
                        }
                    }
                    score(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
                }
            }
            const std::vector<int> match = max_weight_match(score);
            for (std::size_t i = 0; i < g.size(); ++i) {
                const int j = match[i];
                if (j < 0 || score(static_cast<Eigen::Index>(i), j) <= 0.0) {
                    continue;
                }
                ++matched;
                const auto prev = last_match.find(g[i].id);
                if (prev != last_match.end() && prev->second != p[j].id) {
                    ++res.idsw;
                }
                last_match[g[i].id] = p[j].id;
            }
        }
        res.fn += static_cast<long long>(g.size()) - matched;
        res.fp += static_cast<long long>(p.size()) - matched;
    }
    res.mota = 1.0 -
               static_cast<double>(res.fp + res.fn + res.idsw) /
                   static_cast<double>(res.gt_total);
    return res;
}

long long id_switches(const FrameBoxes& gt, const FrameBoxes& pred, double iou_threshold) {
    return clear_metrics(gt, pred, iou_threshold).idsw;
}

IdfResult idf1_metrics(const FrameBoxes& gt, const FrameBoxes& pred, double iou_threshold) {
    const long long gt_total = count_boxes(gt);
    if (gt_total == 0) {
        throw InputError("idf1: empty ground truth");
    }
    const long long pred_total = count_boxes(pred);

    // per-id presence, keyed by frame
    std::map<int, std::map<int, BBox>> gt_tracks;
    std::map<int, std::map<int, BBox>> pred_tracks;
    for (const auto& [frame, boxes] : gt) {
        for (const IdBox& b : boxes) {
            gt_tracks[b.id][frame] = b.box;
        }
    }
    for (const auto& [frame, boxes] : pred) {
        for (const IdBox& b : boxes) {
            pred_tracks[b.id][frame] = b.box;
        }
    }

    std::vector<int> gt_ids;
    std::vector<int> pred_ids;
    for (const auto& [id, t] : gt_tracks) {
        gt_ids.push_back(id);
    }
    for (const auto& [id, t] : pred_tracks) {
        pred_ids.push_back(id);
    }

    Eigen::MatrixXd overlap =
        Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(gt_ids.size()),
                              static_cast<Eigen::Index>(pred_ids.size()));
    for (std::size_t gi = 0; gi < gt_ids.size(); ++gi) {
        const auto& gtrack = gt_tracks[gt_ids[gi]];
        for (std::size_t pi = 0; pi < pred_ids.size(); ++pi) {
            const auto& ptrack = pred_tracks[pred_ids[pi]];
            double count = 0.0;
            for (const auto& [frame, gbox] : gtrack) {
                const auto it = ptrack.find(frame);
                if (it != ptrack.end() && iou(gbox, it->second) >= iou_threshold - kEps) {
                    count += 1.0;
                }
            }
            overlap(static_cast<Eigen::Index>(gi), static_cast<Eigen::Index>(pi)) = count;
        }
    }

    IdfResult res;
    const std::vector<int> match = max_weight_match(overlap);
    for (std::size_t gi = 0; gi < gt_ids.size(); ++gi) {
        if (match[gi] >= 0) {
            res.idtp += static_cast<long long>(
                overlap(static_cast<Eigen::Index>(gi), match[gi]));
        }
    }
    res.idfn = gt_total - res.idtp;
    res.idfp = pred_total - res.idtp;
    const double denom = static_cast<double>(2 * res.idtp + res.idfp + res.idfn);
    res.idf1 = denom > 0.0 ? 2.0 * static_cast<double>(res.idtp) / denom : 0.0;
    return res;
}

HotaResult hota_metrics(const FrameBoxes& gt, const FrameBoxes& pred) {
    const long long gt_total = count_boxes(gt);
    if (gt_total == 0) {
        throw InputError("hota: empty ground truth");
    }
    const long long pred_total = count_boxes(pred);

    std::set<int> frames;
    for (const auto& [f, b] : gt) {
        frames.insert(f);
    }
    for (const auto& [f, b] : pred) {
        frames.insert(f);
    }

    std::map<int, long long> gt_count;
    std::map<int, long long> pred_count;
    std::map<std::pair<int, int>, double> potential;
    static const std::vector<IdBox> kNoBoxes;

    // pass 1: soft co-occurrence, used as the association-aware tie-break
    for (int frame : frames) {
        const auto git = gt.find(frame);
        const auto pit = pred.find(frame);
        const std::vector<IdBox>& g = git != gt.end() ? git->second : kNoBoxes;
        const std::vector<IdBox>& p = pit != pred.end() ? pit->second : kNoBoxes;
        for (const IdBox& b : g) {
            ++gt_count[b.id];
        }
        for (const IdBox& b : p) {
            ++pred_count[b.id];
        }
        if (g.empty() || p.empty()) {
            continue;
        }
        Eigen::MatrixXd sim(static_cast<Eigen::Index>(g.size()),
                            static_cast<Eigen::Index>(p.size()));
        for (std::size_t i = 0; i < g.size(); ++i) {
            for (std::size_t j = 0; j < p.size(); ++j) {
                sim(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                    iou(g[i].box, p[j].box);
            }
        }
        const Eigen::VectorXd row_sums = sim.rowwise().sum();
        const Eigen::VectorXd col_sums = sim.colwise().sum();
        for (std::size_t i = 0; i < g.size(); ++i) {
            for (std::size_t j = 0; j < p.size(); ++j) {
                const double s = sim(static_cast<Eigen::Index>(i),
                                     static_cast<Eigen::Index>(j));
                if (s <= kEps) {
                    continue;
                }
                const double denom = row_sums(static_cast<Eigen::Index>(i)) +
                                     col_sums(static_cast<Eigen::Index>(j)) - s;
                potential[{g[i].id, p[j].id}] += s / std::max(denom, kEps);
            }
        }
    }

    std::map<std::pair<int, int>, double> alignment;
    for (const auto& [pair, pot] : potential) {
        const double denom = static_cast<double>(gt_count[pair.first]) +
                             static_cast<double>(pred_count[pair.second]) - pot;
        alignment[pair] = pot / std::max(denom, kEps);
    }

    HotaResult res;
    for (int a = 0; a < kNumAlphas; ++a) {
        res.alpha[a] = 0.05 * (a + 1);
        std::map<std::pair<int, int>, long long> matches_count;
        long long tp = 0;
        for (int frame : frames) {
            const auto git = gt.find(frame);
            const auto pit = pred.find(frame);
            const std::vector<IdBox>& g = git != gt.end() ? git->second : kNoBoxes;
            const std::vector<IdBox>& p = pit != pred.end() ? pit->second : kNoBoxes;
            if (g.empty() || p.empty()) {
                continue;
            }
            Eigen::MatrixXd sim(static_cast<Eigen::Index>(g.size()),
                                static_cast<Eigen::Index>(p.size()));
            Eigen::MatrixXd score(sim.rows(), sim.cols());
            for (std::size_t i = 0; i < g.size(); ++i) {
                for (std::size_t j = 0; j < p.size(); ++j) {
                    const double s = iou(g[i].box, p[j].box);
                    sim(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = s;
                    const auto it = alignment.find({g[i].id, p[j].id});
                    score(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                        (it != alignment.end() ? it->second : 0.0) * s;
                }
            }
            const std::vector<int> match = max_weight_match(score);
            for (std::size_t i = 0; i < g.size(); ++i) {
                const int j = match[i];
                if (j < 0) {
                    continue;
                }
                if (sim(static_cast<Eigen::Index>(i), j) >= res.alpha[a] - kEps) {
                    ++tp;
                    ++matches_count[{g[i].id, p[j].id}];
                }
            }
        }
        res.tp[a] = tp;
        res.fn[a] = gt_total - tp;
        res.fp[a] = pred_total - tp;
        double ass_sum = 0.0;
        for (const auto& [pair, c] : matches_count) {
            const double union_count = static_cast<double>(gt_count[pair.first]) +
                                       static_cast<double>(pred_count[pair.second]) -
                                       static_cast<double>(c);
            ass_sum += static_cast<double>(c) * (static_cast<double>(c) / union_count);
        }
        res.ass_sum[a] = ass_sum;
        const double det_denom = static_cast<double>(res.tp[a] + res.fn[a] + res.fp[a]);
        res.deta_alpha[a] = det_denom > 0.0 ? static_cast<double>(tp) / det_denom : 0.0;
        res.assa_alpha[a] = tp > 0 ? ass_sum / static_cast<double>(tp) : 0.0;
        res.hota_alpha[a] = std::sqrt(res.deta_alpha[a] * res.assa_alpha[a]);
    }

    for (int a = 0; a < kNumAlphas; ++a) {
        res.deta += res.deta_alpha[a];
        res.assa += res.assa_alpha[a];
        res.hota += res.hota_alpha[a];
    }
    res.deta /= kNumAlphas;
    res.assa /= kNumAlphas;
    res.hota /= kNumAlphas;
    return res;
}

EvalReport evaluate(const std::string& sequence, const FrameBoxes& gt,
                    const FrameBoxes& pred) {
    EvalReport report;
    report.sequence = sequence;
    report.hota = hota_metrics(gt, pred);
    report.clear = clear_metrics(gt, pred);
    report.idf = idf1_metrics(gt, pred);
    return report;
}

EvalReport pool(const std::vector<EvalReport>& reports) {
    EvalReport out;
    out.sequence = "COMBINED";
    if (reports.empty()) {
        return out;
    }
    for (int a = 0; a < kNumAlphas; ++a) {
        out.hota.alpha[a] = 0.05 * (a + 1);
    }
    for (const EvalReport& r : reports) {
        out.clear.fp += r.clear.fp;
        out.clear.fn += r.clear.fn;
        out.clear.idsw += r.clear.idsw;
        out.clear.gt_total += r.clear.gt_total;
        out.idf.idtp += r.idf.idtp;
        out.idf.idfp += r.idf.idfp;
        out.idf.idfn += r.idf.idfn;
        for (int a = 0; a < kNumAlphas; ++a) {
            out.hota.tp[a] += r.hota.tp[a];
            out.hota.fn[a] += r.hota.fn[a];
            out.hota.fp[a] += r.hota.fp[a];
            out.hota.ass_sum[a] += r.hota.ass_sum[a];
        }
    }
    out.clear.mota =
        out.clear.gt_total > 0
            ? 1.0 - static_cast<double>(out.clear.fp + out.clear.fn + out.clear.idsw) /
                        static_cast<double>(out.clear.gt_total)
            : 0.0;
    const double idf_denom =
        static_cast<double>(2 * out.idf.idtp + out.idf.idfp + out.idf.idfn);
    out.idf.idf1 =
        idf_denom > 0.0 ? 2.0 * static_cast<double>(out.idf.idtp) / idf_denom : 0.0;
    for (int a = 0; a < kNumAlphas; ++a) {
        const double det_denom =
            static_cast<double>(out.hota.tp[a] + out.hota.fn[a] + out.hota.fp[a]);
        out.hota.deta_alpha[a] =
            det_denom > 0.0 ? static_cast<double>(out.hota.tp[a]) / det_denom : 0.0;
        out.hota.assa_alpha[a] =
            out.hota.tp[a] > 0 ? out.hota.ass_sum[a] / static_cast<double>(out.hota.tp[a])
                               : 0.0;
        out.hota.hota_alpha[a] =
            std::sqrt(out.hota.deta_alpha[a] * out.hota.assa_alpha[a]);
        out.hota.deta += out.hota.deta_alpha[a];
        out.hota.assa += out.hota.assa_alpha[a];
        out.hota.hota += out.hota.hota_alpha[a];
    }
    out.hota.deta /= kNumAlphas;
    out.hota.assa /= kNumAlphas;
    out.hota.hota /= kNumAlphas;
    return out;
}

void write_eval_csv(const std::filesystem::path& file, const std::vector<EvalReport>& rows) {
    if (file.has_parent_path()) {
        std::filesystem::create_directories(file.parent_path());
    }
    const bool fresh = !std::filesystem::exists(file) ||
                       std::filesystem::file_size(file) == 0;
    std::ofstream out(file, std::ios::app);
    if (!out) {
        throw InputError("cannot open " + file.string());
    }
    if (fresh) {
        out << "sequence,hota,idf1,mota,assa,deta,idsw,fps\n";
    }
    char buf[256];
    for (const EvalReport& r : rows) {
        std::snprintf(buf, sizeof(buf), "%s,%.6f,%.6f,%.6f,%.6f,%.6f,%lld,", r.sequence.c_str(),
                      r.hota.hota, r.idf.idf1, r.clear.mota, r.hota.assa, r.hota.deta,
                      r.clear.idsw);
        out << buf;
        if (r.has_fps) {
            std::snprintf(buf, sizeof(buf), "%.3f", r.fps);
            out << buf;
        }
        out << "\n";
    }
}

std::string format_eval_text(const EvalReport& r) {
    std::ostringstream out;
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "%-16s HOTA %6.2f  IDF1 %6.2f  MOTA %6.2f  AssA %6.2f  DetA %6.2f  IDSW %lld",
                  r.sequence.c_str(), 100.0 * r.hota.hota, 100.0 * r.idf.idf1,
                  100.0 * r.clear.mota, 100.0 * r.hota.assa, 100.0 * r.hota.deta,
                  r.clear.idsw);
    out << buf;
    if (r.has_fps) {
        std::snprintf(buf, sizeof(buf), "  FPS %7.2f", r.fps);
        out << buf;
    }
    return out.str();
}

} // namespace litetrack::metrics
