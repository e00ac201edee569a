#pragma once

#include <litetrack/geometry.hpp>

#include <Eigen/Core>
#include <vector>

namespace litetrack {

/// Constant-velocity motion state over (cx, cy, aspect, height) and their
/// per-frame velocities. Covariance is kept symmetric by construction.
struct KalmanState {
    Eigen::Matrix<double, 8, 1> mean = Eigen::Matrix<double, 8, 1>::Zero();
    Eigen::Matrix<double, 8, 8> covariance = Eigen::Matrix<double, 8, 8>::Zero();
};

/// Height-proportional noise weights, the DeepSORT-lineage convention.
struct KalmanNoise {
    double position_weight = 1.0 / 20.0;
    double velocity_weight = 1.0 / 160.0;
};

/// 0.95 chi-square quantile for 4 degrees of freedom; default gate on the
/// squared Mahalanobis distance of measurement candidates.
inline constexpr double kGatingThreshold95 = 9.4877;

class KalmanFilter {
public:
    explicit KalmanFilter(KalmanNoise noise = {});

    KalmanState initiate(const Xyah& measurement) const;
    KalmanState predict(const KalmanState& state) const;
    /// Throws std::runtime_error when the innovation covariance is degenerate.
    KalmanState update(const KalmanState& state, const Xyah& measurement) const;

    /// Squared Mahalanobis distance of each candidate measurement from the
    /// state's predicted measurement distribution.
    std::vector<double> gating_distance(const KalmanState& state,
                                        const std::vector<Xyah>& candidates) const;

    const KalmanNoise& noise() const { return noise_; }

private:
    void project(const KalmanState& state, Eigen::Matrix<double, 4, 1>& mean_out,
                 Eigen::Matrix<double, 4, 4>& cov_out) const;

    KalmanNoise noise_;
    Eigen::Matrix<double, 8, 8> motion_;      // F
    Eigen::Matrix<double, 4, 8> observation_; // H
};

} // namespace litetrack
