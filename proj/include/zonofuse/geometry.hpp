#ifndef ZONOFUSE_GEOMETRY_HPP_
#define ZONOFUSE_GEOMETRY_HPP_

/**
 * @file geometry.hpp
 * @brief Polytope views of zonotopes and the intersection geometry behind
 *        the tight-strip improvement: H-representation, strip extraction,
 *        vertex enumeration, tight strips, and zonotope/strip intersection.
 *
 * Vertex enumeration is exhaustive n-subset enumeration with feasibility
 * filtering, chosen for verifiability at desk scale (n <= 4, a few dozen
 * halfspace pairs); this caps the supported generator orders.
 */

#include <Eigen/Dense>
#include <vector>

#include "zonofuse/kernels.hpp"
#include "zonofuse/zonotope.hpp"

namespace zonofuse {

/// Strip {z : |normal.z - offset| <= 1}, a region between two parallel
/// hyperplanes.
struct Strip {
    Eigen::RowVectorXd normal;
    double offset = 0.0;
};

/**
 * @brief H-representation stored as eps antipodal halfspace pairs
 *        (h_i, -h_i) with unit normals:  -b_minus_i <= h_i . x <= b_plus_i.
 */
class HalfspaceRep {
  public:
    HalfspaceRep() = default;
    HalfspaceRep(Eigen::MatrixXd normals, Eigen::VectorXd b_plus, Eigen::VectorXd b_minus);

    Eigen::Index pair_count() const { return normals_.rows(); }
    Eigen::Index dim() const { return normals_.cols(); }
    const Eigen::MatrixXd& normals() const { return normals_; }
    const Eigen::VectorXd& b_plus() const { return b_plus_; }
    const Eigen::VectorXd& b_minus() const { return b_minus_; }

    /// Expanded rows in the order (h_1, -h_1, ..., h_eps, -h_eps).
    Eigen::MatrixXd H() const;
    Eigen::VectorXd b() const;

    kernels::PairedHalfspaces paired() const;

  private:
    Eigen::MatrixXd normals_{0, 0};
    Eigen::VectorXd b_plus_, b_minus_;
};

struct VertexSet {
    Eigen::MatrixXd vertices;  ///< n x kappa, deduplicated columns
    Eigen::Index count() const { return vertices.cols(); }
    Eigen::Index dim() const { return vertices.rows(); }
};

/**
 * @brief Exact H-representation of a full-dimensional zonotope: one
 *        antipodal pair per independent facet direction, offsets from the
 *        support function.
 * @throws DegenerateZonotopeError when generator rank < dimension.
 */
HalfspaceRep halfspace_rep(const Zonotope& z, Exec exec = Exec::parallel);

/// One strip per antipodal pair; the intersection of the strips equals the
/// H-rep polytope. @throws FlatSetError on a zero-width pair.
std::vector<Strip> strips_of(const HalfspaceRep& h);

/// Vertex enumeration of the (bounded, nonempty) pair intersection.
/// @throws UnboundedError / EmptyIntersectionError.
VertexSet vertex_enum(const HalfspaceRep& h, Exec exec = Exec::parallel);

/// General halfspace list H x <= b; antipodal rows are paired internally,
/// boundedness is checked through the recession cone.
VertexSet vertex_enum(const Eigen::MatrixXd& H, const Eigen::VectorXd& b,
                      Exec exec = Exec::parallel);

/// V-representation of the intersection of zonotopes, O = ∩_i Z_i.
VertexSet intersection_vertices(const std::vector<Zonotope>& zonotopes,
                                Exec exec = Exec::parallel);

/**
 * @brief For each facet normal, the tightest strip around `center` that
 *        contains every vertex: the touching hyperplane through the farthest
 *        vertex (ties to the lowest vertex index) and its reflection about
 *        the center.
 * @throws DegenerateStripError when a direction has zero width.
 */
std::vector<Strip> tight_strips(const Eigen::VectorXd& center, const HalfspaceRep& h,
                                const VertexSet& verts);

/**
 * @brief Alamo-style zonotope/strip intersection enclosure
 *        <c + λ(d - c_s c), [(I - λ c_s) R, λ]> with the weighted-norm
 *        optimal λ = R Rᵀ c_sᵀ / (c_s R Rᵀ c_sᵀ + 1). The choice of λ is
 *        optimal for every weight simultaneously, so the output norm never
 *        exceeds the input norm.
 */
Zonotope intersect_zonotope_strip(const Zonotope& z, const Strip& s);

/// Exact zonotope recovery of a centrally symmetric 2-D polygon: generators
/// are the half edge vectors, one per antipodal edge pair, in angular order.
/// @throws NotCentrallySymmetricError.
Zonotope symmetric_polygon_to_zonotope(const Eigen::VectorXd& center, const VertexSet& verts);

/**
 * @brief Zonotope realization of an intersection of strips that are
 *        symmetric about `center`.
 *
 * n = 2: exact (vertex enumeration + symmetric polygon recovery).
 * n >= 3: the first n strips with independent normals seed an exact
 * parallelotope; the remaining strips are folded in via
 * intersect_zonotope_strip in index order, keeping only folds that do not
 * increase the volume. Always an enclosure of the strip intersection.
 */
Zonotope realize_strip_intersection(const Eigen::VectorXd& center,
                                    const std::vector<Strip>& strips,
                                    Exec exec = Exec::parallel);

} // namespace zonofuse

#endif
