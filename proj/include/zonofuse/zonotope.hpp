#ifndef ZONOFUSE_ZONOTOPE_HPP_
#define ZONOFUSE_ZONOTOPE_HPP_

/**
 * @file zonotope.hpp
 * @brief Zonotope value type and exact zonotope calculus: Minkowski sum,
 *        linear image, weighted order reduction, norms, support functions,
 *        volume and point containment.
 *
 * A zonotope is the affine image of a unit hypercube,
 *   Z = <c, R> = { c + R u : ||u||_inf <= 1 },
 * with center c in R^n and generator matrix R in R^{n x r}. All values are
 * immutable after construction; every operation is a pure function.
 */

#include <Eigen/Dense>

#include "zonofuse/errors.hpp"

namespace zonofuse {

/// Tolerances used across the library. All comparisons are made relative to
/// the scale of the quantities involved.
namespace tol {
inline constexpr double sym = 1e-10;        ///< weight-matrix symmetry (relative)
inline constexpr double membership = 1e-9;  ///< point containment slack
inline constexpr double feas = 1e-9;        ///< vertex feasibility / support certificates
inline constexpr double angular = 1e-9;     ///< facet-normal dedup (chord distance)
inline constexpr double dedup = 1e-8;       ///< vertex dedup (times bbox diameter)
inline constexpr double stationarity = 1e-8;///< gradient residuals at closed-form optima
inline constexpr double zero_column = 1e-14;///< generator columns dropped by compact()
}

/// Execution policy for the combinatorial kernels. Both policies produce
/// bitwise-identical results; `parallel` runs the subset enumeration on
/// OpenMP threads with a deterministic blocked reduction.
enum class Exec { serial, parallel };

class Zonotope {
  public:
    Zonotope() = default;

    /**
     * @brief Construct from center and generator matrix.
     * @throws DimensionError on row-count mismatch or non-finite entries.
     */
    Zonotope(Eigen::VectorXd center, Eigen::MatrixXd generators);

    /// Axis-aligned box <c, diag(h)> from per-coordinate half-ranges.
    static Zonotope box(const Eigen::VectorXd& center, const Eigen::VectorXd& half_ranges);

    /// A single point (zero generators).
    static Zonotope point(const Eigen::VectorXd& center);

    Eigen::Index dim() const { return center_.size(); }
    Eigen::Index order() const { return generators_.cols(); }
    const Eigen::VectorXd& center() const { return center_; }
    const Eigen::MatrixXd& generators() const { return generators_; }

    /// Generator rank (numerical), n-dimensional iff rank == dim().
    Eigen::Index rank() const;

  private:
    Eigen::VectorXd center_;
    Eigen::MatrixXd generators_{0, 0};
};

/**
 * @brief Symmetric positive definite weight with cached eigenvalue bounds.
 *
 * Weighted Frobenius norms ||R||_W^2 = Tr(R^T W R) are the performance
 * index used throughout; the eigenvalue bounds feed the reduction-loss
 * factor of the stability checks.
 */
class WeightMatrix {
  public:
    /// Identity weight of dimension n.
    static WeightMatrix identity(Eigen::Index n);

    /// @throws InvalidWeightError if W is not symmetric (to tol::sym,
    /// relative) or not positive definite.
    explicit WeightMatrix(const Eigen::MatrixXd& W);

    const Eigen::MatrixXd& matrix() const { return W_; }
    Eigen::Index dim() const { return W_.rows(); }
    double lambda_min() const { return lambda_min_; }
    double lambda_max() const { return lambda_max_; }
    bool is_identity() const { return identity_; }

    /// Upper-triangular factor F with W = F^T F.
    const Eigen::MatrixXd& factor() const { return F_; }

  private:
    WeightMatrix() = default;
    Eigen::MatrixXd W_, F_;
    double lambda_min_ = 1.0, lambda_max_ = 1.0;
    bool identity_ = false;
};

/// Minkowski sum <c1+c2, [R1 R2]>.
Zonotope minkowski_sum(const Zonotope& a, const Zonotope& b);

/// Linear image <L c, L R>; output dimension = rows of L.
Zonotope linear_image(const Eigen::MatrixXd& L, const Zonotope& z);

/**
 * @brief Weighted order reduction: sort columns by decreasing ||R_col||_W^2
 *        (ties by original column index) and enclose the trailing columns in
 *        an aligned box, producing exactly q generators.
 *
 * For q >= r the set is returned unchanged up to column order. The output
 * always contains the input set.
 * @throws InvalidOrderError if q < dim.
 */
Zonotope reduce(const Zonotope& z, Eigen::Index q, const WeightMatrix& W);

/// Tr(R^T W R) = sum of weighted squared column norms.
double weighted_norm_sq(const Eigen::MatrixXd& R, const WeightMatrix& W);
double weighted_norm_sq(const Zonotope& z, const WeightMatrix& W);

/// Support function: max of d.x over x in z.
/// @throws InvalidDirectionError for d = 0.
double support(const Zonotope& z, const Eigen::VectorXd& d);

/// Exact n-volume, 2^n * sum over n-column subsets of |det|; 0 when r < n.
double volume(const Zonotope& z, Exec exec = Exec::parallel);

/**
 * @brief Certified point membership.
 *
 * Full-rank zonotopes use the facet (H-representation) test with slack
 * tol::membership, exact up to that slack. Rank-deficient zonotopes fall
 * back to a least-norm solve of c + R u = x with ||u||_inf <= 1.
 */
bool contains_point(const Zonotope& z, const Eigen::VectorXd& x,
                    double tolerance = tol::membership, Exec exec = Exec::serial);

/// Axis-aligned bounding box of a nonempty point set (columns = points).
/// @throws EmptySetError for zero columns.
Zonotope interval_hull(const Eigen::MatrixXd& points);

/// Drop zero generator columns (|entries| <= tol::zero_column * scale).
Zonotope compact(const Zonotope& z);

} // namespace zonofuse

#endif
