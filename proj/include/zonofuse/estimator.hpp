#ifndef ZONOFUSE_ESTIMATOR_HPP_
#define ZONOFUSE_ESTIMATOR_HPP_

/**
 * @file estimator.hpp
 * @brief Per-sensor recursive zonotopic estimator: prediction, observation
 *        update with the optimal gain, and weighted order reduction. The
 *        true state stays inside the estimate set for any noise sequence
 *        with ||w||_inf <= 1, ||v||_inf <= 1 started inside the initial set.
 */

#include <Eigen/Dense>
#include <functional>

#include "zonofuse/zonotope.hpp"

namespace zonofuse {

/// x(k+1) = A(k) x(k) + B(k) w(k), x(0) in `initial`.
struct PlantModel {
    std::function<Eigen::MatrixXd(int)> A;
    std::function<Eigen::MatrixXd(int)> B;
    Zonotope initial;

    static PlantModel time_invariant(Eigen::MatrixXd A, Eigen::MatrixXd B, Zonotope initial);
    Eigen::Index dim() const { return initial.dim(); }
};

/// y_i(k) = C_i(k) x(k) + D_i(k) v_i(k).
struct SensorModel {
    int id = 0;
    std::function<Eigen::MatrixXd(int)> C;
    std::function<Eigen::MatrixXd(int)> D;

    static SensorModel time_invariant(int id, Eigen::MatrixXd C, Eigen::MatrixXd D);
};

struct LocalEstimate {
    int sensor_id = 0;
    int step = 0;
    Zonotope set;
};

/// Prediction <A x_hat, [A R, B]> of the step-k state from the step k-1
/// estimate.
Zonotope predict(const LocalEstimate& prev, const PlantModel& plant, int k);

/**
 * @brief Optimal observation gain K = P C^T (C P C^T + D D^T)^{-1} with
 *        P = R_p R_p^T, via a symmetric solve.
 * @throws SingularInnovationError when the innovation matrix is singular or
 *         has condition number above 1e12.
 */
Eigen::MatrixXd optimal_gain(const Zonotope& pred, const SensorModel& sensor, int k);

/// Observation update <x_p + K(y - C x_p), [(I - K C) R_p, -K D]>.
Zonotope observe(const Zonotope& pred, const SensorModel& sensor, int k,
                 const Eigen::VectorXd& y, const Eigen::MatrixXd& K);

/// One full predict -> observe -> reduce step with the optimal gain; the
/// result carries exactly `r` generators whenever the update order exceeds r.
LocalEstimate step(const LocalEstimate& prev, const PlantModel& plant,
                   const SensorModel& sensor, const Eigen::VectorXd& y,
                   const WeightMatrix& W, Eigen::Index r);

} // namespace zonofuse

#endif
