#ifndef ZONOFUSE_STABILITY_HPP_
#define ZONOFUSE_STABILITY_HPP_

/**
 * @file stability.hpp
 * @brief Ultimate-boundedness checks for the time-invariant closed loop:
 *        decay rate gamma of (I-KC)A under a constant weight, the
 *        reduction-loss factor mu, and the contraction test
 *        gamma (1 + mu/(d+r)) < 1 with the resulting bound on ||R(k)||^2_W.
 */

#include <Eigen/Dense>

#include "zonofuse/estimator.hpp"
#include "zonofuse/zonotope.hpp"

namespace zonofuse {

struct StabilityReport {
    int sensor_id = 0;
    double gamma = 0.0;        ///< decay rate of the closed loop under W
    double mu = 0.0;           ///< reduction-loss factor
    int d = 0;                 ///< column surplus per step (n_w + m)
    Eigen::Index order = 0;    ///< reduction order r the check was run at
    double contraction = 0.0;  ///< gamma * (1 + mu/(d+r))
    double phi = 0.0;          ///< constant forcing term
    double ultimate_bound = 0.0;  ///< phi/(1-contraction), inf when contraction >= 1
    Eigen::Index min_bounded_order = -1;  ///< smallest r with contraction < 1, -1 if none
    bool bounded = false;
};

/// mu = ((lambda_max/lambda_min)(d+n) - 1)(d+n).
double compute_mu(double lambda_min, double lambda_max, int d, int n);

/// Smallest gamma with gamma W >= A_cl^T W A_cl for A_cl = (I-KC)A:
/// the top eigenvalue of F^{-T} A_cl^T W A_cl F^{-1}, W = F^T F.
double estimate_gamma(const Eigen::MatrixXd& A, const Eigen::MatrixXd& C,
                      const Eigen::MatrixXd& K, const WeightMatrix& W);

/// Steady-state optimal gain: iterate predict/gain/observe/reduce on the
/// generator shape to a fixed point (relative change <= 1e-10, cap 10^4).
Eigen::MatrixXd steady_state_gain(const PlantModel& plant, const SensorModel& sensor,
                                  const WeightMatrix& W, Eigen::Index r);

/// Theorem-4 style check for one sensor with constant matrices and a steady
/// gain. phi = ||(I-KC)AB||^2_W + ||KD||^2_W as a constant forcing term.
StabilityReport check_ultimate_boundedness(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                                           const Eigen::MatrixXd& C, const Eigen::MatrixXd& D,
                                           const Eigen::MatrixXd& K, const WeightMatrix& W,
                                           Eigen::Index r, int sensor_id = 0);

} // namespace zonofuse

#endif
