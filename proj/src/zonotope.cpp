#include "zonofuse/zonotope.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "zonofuse/kernels.hpp"

namespace zonofuse {

Zonotope::Zonotope(Eigen::VectorXd center, Eigen::MatrixXd generators)
    : center_(std::move(center)), generators_(std::move(generators)) {
    if (generators_.size() == 0 && generators_.rows() == 0)
        generators_.resize(center_.size(), 0);
    if (generators_.rows() != center_.size())
        throw DimensionError("Zonotope: generator rows must match center dimension");
    if (!center_.allFinite() || !generators_.allFinite())
        throw DimensionError("Zonotope: entries must be finite");
}

Zonotope Zonotope::box(const Eigen::VectorXd& center, const Eigen::VectorXd& half_ranges) {
    if (center.size() != half_ranges.size())
        throw DimensionError("Zonotope::box: dimension mismatch");
    return Zonotope(center, Eigen::MatrixXd(half_ranges.asDiagonal()));
}

Zonotope Zonotope::point(const Eigen::VectorXd& center) {
    return Zonotope(center, Eigen::MatrixXd(center.size(), 0));
}

Eigen::Index Zonotope::rank() const {
    if (generators_.cols() == 0) return 0;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(generators_);
    const auto& s = svd.singularValues();
    const double thresh = std::max(generators_.rows(), generators_.cols()) *
                          std::numeric_limits<double>::epsilon() * s(0);
    Eigen::Index r = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) > thresh) ++r;
    return r;
}

WeightMatrix WeightMatrix::identity(Eigen::Index n) {
    WeightMatrix w;
    w.W_ = Eigen::MatrixXd::Identity(n, n);
    w.F_ = w.W_;
    w.lambda_min_ = w.lambda_max_ = 1.0;
    w.identity_ = true;
    return w;
}

WeightMatrix::WeightMatrix(const Eigen::MatrixXd& W) {
    if (W.rows() != W.cols() || W.rows() == 0)
        throw InvalidWeightError("WeightMatrix: must be square and nonempty");
    const double scale = W.cwiseAbs().maxCoeff();
    if ((W - W.transpose()).cwiseAbs().maxCoeff() > tol::sym * std::max(1.0, scale))
        throw InvalidWeightError("WeightMatrix: not symmetric");
    W_ = 0.5 * (W + W.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(W_);
    lambda_min_ = eig.eigenvalues().minCoeff();
    lambda_max_ = eig.eigenvalues().maxCoeff();
    if (lambda_min_ <= 0.0)
        throw InvalidWeightError("WeightMatrix: not positive definite");
    Eigen::LLT<Eigen::MatrixXd> llt(W_);
    F_ = Eigen::MatrixXd(llt.matrixL()).transpose();  // W = F^T F
    identity_ = W_.isIdentity(0.0);
}

Zonotope minkowski_sum(const Zonotope& a, const Zonotope& b) {
    if (a.dim() != b.dim())
        throw DimensionError("minkowski_sum: dimension mismatch");
    Eigen::MatrixXd R(a.dim(), a.order() + b.order());
    R << a.generators(), b.generators();
    return Zonotope(a.center() + b.center(), std::move(R));
}

Zonotope linear_image(const Eigen::MatrixXd& L, const Zonotope& z) {
    if (L.cols() != z.dim())
        throw DimensionError("linear_image: matrix columns must match zonotope dimension");
    return Zonotope(L * z.center(), L * z.generators());
}

Zonotope reduce(const Zonotope& z, Eigen::Index q, const WeightMatrix& W) {
    const Eigen::Index n = z.dim(), r = z.order();
    if (q < n) throw InvalidOrderError("reduce: target order below dimension");
    if (W.dim() != n) throw DimensionError("reduce: weight dimension mismatch");

    const Eigen::MatrixXd& R = z.generators();
    std::vector<Eigen::Index> idx(static_cast<std::size_t>(r));
    std::iota(idx.begin(), idx.end(), 0);
    Eigen::VectorXd norms(r);
    for (Eigen::Index j = 0; j < r; ++j) {
        norms(j) = W.is_identity() ? R.col(j).squaredNorm()
                                   : R.col(j).dot(W.matrix() * R.col(j));
    }
    std::stable_sort(idx.begin(), idx.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return norms(a) > norms(b); });

    Eigen::MatrixXd sorted(n, r);
    for (Eigen::Index j = 0; j < r; ++j) sorted.col(j) = R.col(idx[static_cast<std::size_t>(j)]);

    if (q >= r) return Zonotope(z.center(), std::move(sorted));

    const Eigen::Index keep = q - n;           // trailing r-keep > n columns get boxed
    Eigen::MatrixXd out(n, q);
    out.leftCols(keep) = sorted.leftCols(keep);
    out.rightCols(n) = Eigen::MatrixXd(
        sorted.rightCols(r - keep).cwiseAbs().rowwise().sum().asDiagonal());
    return Zonotope(z.center(), std::move(out));
}

double weighted_norm_sq(const Eigen::MatrixXd& R, const WeightMatrix& W) {
    if (R.rows() != W.dim())
        throw DimensionError("weighted_norm_sq: row count must match weight dimension");
    if (W.is_identity()) return R.squaredNorm();
    return R.cwiseProduct(W.matrix() * R).sum();
}

double weighted_norm_sq(const Zonotope& z, const WeightMatrix& W) {
    return weighted_norm_sq(z.generators(), W);
}

double support(const Zonotope& z, const Eigen::VectorXd& d) {
    if (d.size() != z.dim()) throw DimensionError("support: direction dimension mismatch");
    if (d.norm() == 0.0) throw InvalidDirectionError("support: zero direction");
    return d.dot(z.center()) + (d.transpose() * z.generators()).cwiseAbs().sum();
}

double volume(const Zonotope& z, Exec exec) {
    if (z.order() < z.dim()) return 0.0;
    return std::ldexp(kernels::volume_subset_sum(z.generators(), exec),
                      static_cast<int>(z.dim()));
}

bool contains_point(const Zonotope& z, const Eigen::VectorXd& x, double tolerance, Exec exec) {
    if (x.size() != z.dim()) throw DimensionError("contains_point: dimension mismatch");
    const Eigen::Index n = z.dim();
    if (z.order() == 0) {
        const double d = (x - z.center()).norm();
        return d <= tolerance * (1.0 + x.norm());
    }
    if (n == 1 || z.rank() == n)
        return kernels::point_in_zonotope(z.center(), z.generators(), x, tolerance, exec);

    // degenerate: least-norm solve of c + R u = x, then check ||u||_inf <= 1
    const Eigen::VectorXd delta = x - z.center();
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(z.generators());
    const Eigen::VectorXd u = cod.solve(delta);
    const double resid = (z.generators() * u - delta).norm();
    if (resid > tolerance * (1.0 + delta.norm())) return false;
    return u.cwiseAbs().maxCoeff() <= 1.0 + tolerance;
}

Zonotope interval_hull(const Eigen::MatrixXd& points) {
    if (points.cols() == 0) throw EmptySetError("interval_hull: empty point set");
    const Eigen::VectorXd lo = points.rowwise().minCoeff();
    const Eigen::VectorXd hi = points.rowwise().maxCoeff();
    return Zonotope::box(0.5 * (lo + hi), 0.5 * (hi - lo));
}

Zonotope compact(const Zonotope& z) {
    const Eigen::MatrixXd& R = z.generators();
    const double scale = std::max(1.0, R.size() ? R.cwiseAbs().maxCoeff() : 0.0);
    std::vector<Eigen::Index> keep;
    for (Eigen::Index j = 0; j < R.cols(); ++j)
        if (R.col(j).cwiseAbs().maxCoeff() > tol::zero_column * scale) keep.push_back(j);
    if (static_cast<Eigen::Index>(keep.size()) == R.cols()) return z;
    Eigen::MatrixXd out(z.dim(), static_cast<Eigen::Index>(keep.size()));
    for (std::size_t t = 0; t < keep.size(); ++t) out.col(static_cast<Eigen::Index>(t)) = R.col(keep[t]);
    return Zonotope(z.center(), std::move(out));
}

} // namespace zonofuse
