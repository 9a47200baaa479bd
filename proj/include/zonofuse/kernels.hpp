#ifndef ZONOFUSE_KERNELS_HPP_
#define ZONOFUSE_KERNELS_HPP_

/**
 * @file kernels.hpp
 * @brief Data-parallel subset-enumeration kernels behind the geometry
 *        operations, each with a serial reference path and an OpenMP path.
 *
 * Every kernel enumerates fixed-size column/row subsets in lexicographic
 * order and combines per-block partial results in block order, so the
 * serial and parallel paths produce bitwise-identical output for any
 * thread count.
 */

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "zonofuse/zonotope.hpp"

namespace zonofuse::kernels {

/// Subsets per OpenMP work block. Fixed so that blocked floating-point
/// accumulation is independent of thread count.
inline constexpr std::int64_t kBlock = 8192;

std::int64_t binomial(std::int64_t m, std::int64_t k);

/// Writes the combination of rank `rank` (lexicographic) of k out of m into idx.
void unrank_combination(std::int64_t rank, std::int64_t m, std::int64_t k, int* idx);

/// Advances idx to the next combination; returns false past the last one.
bool next_combination(int* idx, std::int64_t m, std::int64_t k);

/// Sum over all n-column subsets of |det(R[:, subset])|.
double volume_subset_sum(const Eigen::MatrixXd& R, Exec exec);

/**
 * @brief Unit facet normals of the zonotope generated by R: one normal per
 *        (n-1)-column subset of rank n-1 (generalized cross product),
 *        canonical sign, deduplicated to tol::angular chord distance.
 *
 * Enumeration runs under the execution policy; deduplication is a
 * sequential pass in subset order.
 */
Eigen::MatrixXd facet_normals(const Eigen::MatrixXd& R, Exec exec);

/// Facet membership test |h.(x-c)| <= sum_j |h.R_j| + slack over all
/// (n-1)-subset normals h, without materializing the normal list.
bool point_in_zonotope(const Eigen::VectorXd& c, const Eigen::MatrixXd& R,
                       const Eigen::VectorXd& x, double tolerance, Exec exec);

/**
 * @brief Halfspace pairs  -b_minus_i <= h_i . x <= b_plus_i  with unit
 *        normals h_i. Infinite offsets mark one-sided pairs.
 */
struct PairedHalfspaces {
    Eigen::MatrixXd normals;  ///< eps x n, unit rows
    Eigen::VectorXd b_plus;   ///< upper offsets (may be +inf)
    Eigen::VectorXd b_minus;  ///< lower offsets, constraint -h.x <= b_minus

    Eigen::Index pair_count() const { return normals.rows(); }
};

/// Merge (near-)parallel pairs keeping the tighter offsets; intersection
/// semantics are preserved exactly up to tol::angular.
PairedHalfspaces dedup_pairs(const PairedHalfspaces& hs);

/**
 * @brief All feasible active-set solutions of n pairs x n sign choices:
 *        candidate vertices of the polytope, in deterministic enumeration
 *        order, feasibility-filtered against every pair with slack
 *        feas_tol * (1 + |offset|). Not yet deduplicated.
 */
Eigen::MatrixXd vertex_candidates(const PairedHalfspaces& hs, double feas_tol, Exec exec);

/// Deduplicate point columns with tolerance tol::dedup * bbox diameter.
Eigen::MatrixXd dedup_points(const Eigen::MatrixXd& pts);

} // namespace zonofuse::kernels

#endif
