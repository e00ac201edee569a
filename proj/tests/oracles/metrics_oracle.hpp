#pragma once

// Definition-level reference for the tracking metrics, written before and
// independently of the production engine: exhaustive enumeration for every
// matching step instead of a Hungarian solver, plain maps and loops.

#include <litetrack/metrics.hpp>

#include <array>
#include <map>
#include <vector>

namespace moracle {

using litetrack::metrics::FrameBoxes;

struct ClearCounts {
    long long fp = 0;
    long long fn = 0;
    long long idsw = 0;
    long long gt_total = 0;
    double mota = 0.0;
};

struct IdfCounts {
    long long idtp = 0;
    long long idfp = 0;
    long long idfn = 0;
    double idf1 = 0.0;
};

struct HotaCounts {
    double hota = 0.0;
    double deta = 0.0;
    double assa = 0.0;
    std::array<long long, 19> tp{};
    std::array<long long, 19> fn{};
    std::array<long long, 19> fp{};
    std::array<double, 19> ass_sum{};
    std::array<double, 19> deta_alpha{};
    std::array<double, 19> assa_alpha{};
    std::array<double, 19> hota_alpha{};
};

ClearCounts clear(const FrameBoxes& gt, const FrameBoxes& pred, double threshold = 0.5);
IdfCounts idf1(const FrameBoxes& gt, const FrameBoxes& pred, double threshold = 0.5);
HotaCounts hota(const FrameBoxes& gt, const FrameBoxes& pred);

} // namespace moracle
