#ifndef ZONOFUSE_FUSION_HPP_
#define ZONOFUSE_FUSION_HPP_

/**
 * @file fusion.hpp
 * @brief Distributed zonotope fusion criteria: batch fusion with analytically
 *        optimal weights, the tight-strip improved fusion, sequential fusion,
 *        plus volume-optimal and box baselines.
 *
 * Every criterion produces an enclosure of the intersection of the local
 * estimates (state inclusion); the three main criteria additionally certify
 * ||R_fused||^2_W <= min_i ||R_i||^2_W.
 */

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "zonofuse/estimator.hpp"
#include "zonofuse/geometry.hpp"
#include "zonofuse/zonotope.hpp"

namespace zonofuse {

enum class FusionMethod { batch_opt, improved, sequential, volume_opt, box };

std::string to_string(FusionMethod m);
FusionMethod fusion_method_from_string(const std::string& name);

struct FusionProblem {
    std::vector<LocalEstimate> estimates;  ///< L >= 2, same step, same dimension
    WeightMatrix W = WeightMatrix::identity(1);
    std::vector<int> arrival;              ///< permutation of 0..L-1 (sequential mode)

    Eigen::Index dim() const { return estimates.front().set.dim(); }
    std::size_t count() const { return estimates.size(); }
};

/// Wrap plain zonotopes (same step, ids 0..L-1, identity arrival order).
FusionProblem make_problem(const std::vector<Zonotope>& zs, const WeightMatrix& W);

struct FusionResult {
    Zonotope fused;
    FusionMethod method = FusionMethod::batch_opt;
    std::vector<Eigen::MatrixXd> params;   ///< the M matrices used
    double weighted_norm_sq = 0.0;
    double volume = 0.0;
    Eigen::Index generator_order = 0;
    double wall_time_ms = 0.0;
    bool converged = true;                 ///< volume_opt: budget not exhausted
    int balance_splits = 1;                ///< representation splits applied
    std::optional<Zonotope> prefusion;     ///< improved/sequential: the object the
                                           ///< tight strips were built from
};

/// Matrices of the linear parameterization R_[1] = N1 + M N2 (exposed for
/// stationarity checks).
void batch_objective_matrices(const FusionProblem& p, Eigen::MatrixXd& N1, Eigen::MatrixXd& N2);

/// Batch criterion with given weights M_2..M_L:
/// center x1 + sum M_i (x_i - x1), generators [(I - sum M_i) R_1, M_i R_i ...].
FusionResult fuse_batch(const FusionProblem& p, const std::vector<Eigen::MatrixXd>& M,
                        Exec exec = Exec::parallel);

/// Analytic minimizer of ||N1 + M N2||^2_W:  M = -N1 N2^T (N2 N2^T)^{-1}.
/// @throws RankDeficiencyError when N2 N2^T is singular.
std::vector<Eigen::MatrixXd> optimal_batch_weights(const FusionProblem& p);

FusionResult fuse_batch_optimal(const FusionProblem& p, Exec exec = Exec::parallel);

/**
 * @brief Improved criterion: batch-optimal fusion, tight strips around its
 *        center against the vertices of O = ∩_i X_i, realized as a zonotope
 *        (exactly in 2-D). The representation is balanced by uniform column
 *        splitting so the reported norm never exceeds the best local norm.
 * @param o_vertices optional precomputed vertices of O.
 */
FusionResult fuse_improved(const FusionProblem& p, const VertexSet* o_vertices = nullptr,
                           Exec exec = Exec::parallel);

/// One sequential stage: M = P_f (P_f + P_next)^{-1} with P = R R^T,
/// result <x_f + M(x_next - x_f), [(I-M) R_f, M R_next]>.
/// @throws SingularSumError when P_f + P_next is singular.
std::pair<Zonotope, Eigen::MatrixXd> fuse_sequential_stage(const Zonotope& acc,
                                                           const Zonotope& next,
                                                           const WeightMatrix& W);

/// Fold the locals in arrival order through fuse_sequential_stage, then apply
/// the tight-strip improvement against O over all locals.
FusionResult fuse_sequential(const FusionProblem& p, const VertexSet* o_vertices = nullptr,
                             Exec exec = Exec::parallel);

/**
 * @brief Batch fusion weights minimizing the volume, by simplex-style local
 *        search (budget 2000 evaluations) seeded at the Frobenius-optimal M.
 *        Desk scale only (n <= 4, L <= 4). Result volume never exceeds the
 *        seed volume; `converged` reports whether the search settled within
 *        budget.
 */
FusionResult fuse_volume_optimal(const FusionProblem& p, Exec exec = Exec::parallel);

/// Axis-aligned interval hull of O's vertices.
FusionResult box_baseline(const FusionProblem& p, const VertexSet* o_vertices = nullptr,
                          Exec exec = Exec::parallel);

} // namespace zonofuse

#endif
