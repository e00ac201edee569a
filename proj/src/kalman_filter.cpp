#include <litetrack/kalman_filter.hpp>

#include <Eigen/Cholesky>

#include <cmath>
#include <stdexcept>

namespace litetrack {
namespace {

Eigen::Matrix<double, 8, 1> process_std(const KalmanNoise& w, double height) {
    Eigen::Matrix<double, 8, 1> std;
    std << w.position_weight * height, w.position_weight * height, 1e-2,
        w.position_weight * height, w.velocity_weight * height,
        w.velocity_weight * height, 1e-5, w.velocity_weight * height;
    return std;
}

Eigen::Matrix<double, 4, 1> measurement_std(const KalmanNoise& w, double height) {
    Eigen::Matrix<double, 4, 1> std;
    std << w.position_weight * height, w.position_weight * height, 1e-1,
        w.position_weight * height;
    return std;
}

Eigen::Matrix<double, 8, 8> symmetrized(const Eigen::Matrix<double, 8, 8>& m) {
    return 0.5 * (m + m.transpose());
}

} // namespace

KalmanFilter::KalmanFilter(KalmanNoise noise) : noise_(noise) {
    motion_ = Eigen::Matrix<double, 8, 8>::Identity();
    for (int i = 0; i < 4; ++i) {
        motion_(i, i + 4) = 1.0; // position += velocity
    }
    observation_ = Eigen::Matrix<double, 4, 8>::Zero();
    for (int i = 0; i < 4; ++i) {
        observation_(i, i) = 1.0;
    }
}

KalmanState KalmanFilter::initiate(const Xyah& m) const {
    KalmanState s;
    s.mean << m.cx, m.cy, m.aspect, m.height, 0.0, 0.0, 0.0, 0.0;
    Eigen::Matrix<double, 8, 1> std;
    std << 2.0 * noise_.position_weight * m.height, 2.0 * noise_.position_weight * m.height,
        1e-2, 2.0 * noise_.position_weight * m.height,
        10.0 * noise_.velocity_weight * m.height, 10.0 * noise_.velocity_weight * m.height,
        1e-5, 10.0 * noise_.velocity_weight * m.height;
    s.covariance = std.cwiseProduct(std).asDiagonal();
    return s;
}

KalmanState KalmanFilter::predict(const KalmanState& state) const {
    const Eigen::Matrix<double, 8, 1> std = process_std(noise_, state.mean(3));
    const Eigen::Matrix<double, 8, 8> q =
        Eigen::Matrix<double, 8, 8>(std.cwiseProduct(std).asDiagonal());
    KalmanState out;
    out.mean = motion_ * state.mean;
    out.covariance =
        symmetrized(motion_ * state.covariance * motion_.transpose() + q);
    return out;
}

void KalmanFilter::project(const KalmanState& state, Eigen::Matrix<double, 4, 1>& mean_out,
                           Eigen::Matrix<double, 4, 4>& cov_out) const {
    const Eigen::Matrix<double, 4, 1> std = measurement_std(noise_, state.mean(3));
    const Eigen::Matrix<double, 4, 4> r =
        Eigen::Matrix<double, 4, 4>(std.cwiseProduct(std).asDiagonal());
    mean_out = observation_ * state.mean;
    cov_out = observation_ * state.covariance * observation_.transpose() + r;
}

KalmanState KalmanFilter::update(const KalmanState& state, const Xyah& m) const {
    Eigen::Matrix<double, 4, 1> projected_mean;
    Eigen::Matrix<double, 4, 4> innovation_cov;
    project(state, projected_mean, innovation_cov);

    const Eigen::LLT<Eigen::Matrix<double, 4, 4>> chol(innovation_cov);
    if (chol.info() != Eigen::Success) {
        throw std::runtime_error("kalman update: degenerate innovation covariance");
    }
    // K = P Hᵀ S⁻¹ via Cholesky solve of S Kᵀ = H Pᵀ
    const Eigen::Matrix<double, 4, 8> ph_t =
        observation_ * state.covariance.transpose();
    const Eigen::Matrix<double, 8, 4> gain = chol.solve(ph_t).transpose();

    Eigen::Matrix<double, 4, 1> z;
    z << m.cx, m.cy, m.aspect, m.height;

    KalmanState out;
    out.mean = state.mean + gain * (z - projected_mean);
    out.covariance = symmetrized(state.covariance -
                                 gain * innovation_cov * gain.transpose());
    return out;
}

std::vector<double> KalmanFilter::gating_distance(const KalmanState& state,
                                                  const std::vector<Xyah>& candidates) const {
    Eigen::Matrix<double, 4, 1> projected_mean;
    Eigen::Matrix<double, 4, 4> innovation_cov;
    project(state, projected_mean, innovation_cov);

    const Eigen::LLT<Eigen::Matrix<double, 4, 4>> chol(innovation_cov);
    if (chol.info() != Eigen::Success) {
        throw std::runtime_error("kalman gating: degenerate innovation covariance");
    }
    const Eigen::Matrix<double, 4, 4> cho_l(chol.matrixL());

    std::vector<double> out;
    out.reserve(candidates.size());
    for (const Xyah& c : candidates) {
        Eigen::Matrix<double, 4, 1> residual;
        residual << c.cx - projected_mean(0), c.cy - projected_mean(1),
            c.aspect - projected_mean(2), c.height - projected_mean(3);
        const Eigen::Matrix<double, 4, 1> z =
            cho_l.triangularView<Eigen::Lower>().solve(residual);
        out.push_back(z.squaredNorm());
    }
    return out;
}

} // namespace litetrack
