#ifndef ZONOFUSE_SIM_HPP_
#define ZONOFUSE_SIM_HPP_

/**
 * @file sim.hpp
 * @brief Deterministic scenario runner and fusion benchmark harness: truth
 *        simulation, local estimators, per-step fusion by every selected
 *        method, certified inclusion/superiority/nesting flags, CSV/JSON
 *        output, and method timing tables.
 */

#include <cstdint>
#include <string>
#include <vector>

#include "zonofuse/config.hpp"
#include "zonofuse/fusion.hpp"

namespace zonofuse {

struct SensorStepMetrics {
    double norm2 = 0.0;
    double volume = 0.0;
    bool inclusion = false;
};

struct MethodStepMetrics {
    double norm2 = 0.0;
    double volume = 0.0;
    bool inclusion = false;
    bool superiority = false;  ///< norm2 <= min local norm2 (certified)
    bool nesting = true;       ///< improved/sequential: support-nested in the prefusion object
    double wall_ms = 0.0;
};

struct StepRecord {
    int k = 0;
    Eigen::VectorXd truth;
    std::vector<SensorStepMetrics> sensors;
    std::vector<MethodStepMetrics> methods;  ///< parallel to ScenarioConfig::methods
};

struct ScenarioResult {
    std::vector<StepRecord> steps;
    int exit_code = 0;          ///< 0 ok, 2 on a certified inclusion violation
    std::string violation;      ///< offending step description when exit_code == 2
};

/// Simulate the configured plant/sensors over the horizon and fuse each step
/// with every selected method. Deterministic for a fixed config + seed.
ScenarioResult run_scenario(const ScenarioConfig& cfg, Exec exec = Exec::parallel);

/// Fixed-schema CSV with a versioned header comment; floats at 17
/// significant digits. Wall-time columns carry timing noise; everything
/// else is reproducible byte for byte.
std::string to_csv(const ScenarioConfig& cfg, const ScenarioResult& res);

std::string to_json_string(const ScenarioConfig& cfg, const ScenarioResult& res);

/// Gnuplot-compatible .dat: one block per curve (locals, then each method),
/// lines "k norm2 volume", blocks separated by two blank lines.
std::string to_gnuplot_dat(const ScenarioConfig& cfg, const ScenarioResult& res);

struct BenchRow {
    int sensors = 0;
    Eigen::Index generators = 0;
    std::string method;
    double median_ms = 0.0;
    std::uint64_t checksum = 0;  ///< fused-output hash, timing independent
};

/**
 * @brief Median fusion wall-times on random planar zonotopes per
 *        (sensor count, generator count, method). `sequential_stages` times
 *        the stage folds alone (no improvement step), matching the
 *        batch-vs-sequential comparison.
 */
std::vector<BenchRow> bench_fusion(const std::vector<Eigen::Index>& generator_counts,
                                   const std::vector<int>& sensor_counts, int repetitions,
                                   std::uint64_t seed,
                                   const std::vector<std::string>& methods = {
                                       "batch_opt", "improved", "sequential_stages",
                                       "volume_opt"});

std::string bench_csv(const std::vector<BenchRow>& rows);

} // namespace zonofuse

#endif
