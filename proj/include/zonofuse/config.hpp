#ifndef ZONOFUSE_CONFIG_HPP_
#define ZONOFUSE_CONFIG_HPP_

/**
 * @file config.hpp
 * @brief Scenario configuration: plant/sensor matrices, horizon, reduction
 *        order, weight, seed, arrival-order policy and method selection,
 *        with a flat key = value config-file format and the two built-in
 *        presets ("tracking" and "zono2d").
 */

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "zonofuse/fusion.hpp"
#include "zonofuse/zonotope.hpp"

namespace zonofuse {

struct SensorConfig {
    Eigen::MatrixXd C, D;
};

struct ScenarioConfig {
    std::string name = "custom";
    Eigen::MatrixXd A, B;
    std::vector<SensorConfig> sensors;
    Eigen::VectorXd c0;
    Eigen::MatrixXd R0;

    int horizon = 200;
    double period = 1.0;              ///< sampling period T (tracking preset)
    Eigen::Index order = 5;           ///< estimator reduction order r
    Eigen::Index stability_order = 120;///< reduction order for the boundedness check
    Eigen::MatrixXd weight;           ///< performance-index W; empty = identity
    std::uint64_t seed = 1;
    std::vector<int> arrival;         ///< fixed arrival permutation; empty = per-step random
    std::vector<FusionMethod> methods{FusionMethod::batch_opt, FusionMethod::improved,
                                      FusionMethod::sequential, FusionMethod::box};
    bool adversarial_noise = false;
    Eigen::Index report_order = 0;    ///< re-reduce fused results before reporting; 0 = off

    std::vector<Zonotope> fixture;    ///< one-shot fusion fixture (zono2d preset)

    Eigen::Index dim() const { return A.rows(); }
    WeightMatrix weight_matrix() const {
        return weight.size() ? WeightMatrix(weight) : WeightMatrix::identity(dim());
    }
    Zonotope initial() const { return Zonotope(c0, R0); }
};

/// Non-maneuvering target with two displacement sensors of complementary
/// precision; sampling period T.
ScenarioConfig tracking_preset(double T = 1.0);

/// Three planar 4-order zonotopes with a common intersection (illustrative
/// coordinates; the source publication prints none).
ScenarioConfig zono2d_preset();

/// The zono2d fixture zonotopes.
std::vector<Zonotope> zono2d_fixture();

/// Parse a config file: `key = value` lines, `#` comments, optional
/// `[plant]` / `[sensor.N]` tables with matrix values in JSON array form,
/// `preset = tracking|zono2d` as a base. Later keys override the preset.
ScenarioConfig load_config(const std::string& path);

} // namespace zonofuse

#endif
