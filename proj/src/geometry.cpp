#include "zonofuse/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace zonofuse {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Eigen::Index normal_rank(const Eigen::MatrixXd& normals) {
    if (normals.rows() == 0) return 0;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(normals);
    const auto& s = svd.singularValues();
    Eigen::Index r = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) > 1e-10 * s(0)) ++r;
    return r;
}

VertexSet enumerate_pairs(const kernels::PairedHalfspaces& pairs, Exec exec) {
    const Eigen::MatrixXd cand = kernels::vertex_candidates(pairs, tol::feas, exec);
    if (cand.cols() == 0)
        throw EmptyIntersectionError("vertex_enum: no feasible vertex, intersection is empty");
    return VertexSet{kernels::dedup_points(cand)};
}

// Exact recession-cone check for {x : pairs}. Two-sided pairs pin h.d = 0;
// one-sided rows leave h.d <= 0. Throws UnboundedError on a nontrivial cone.
void check_bounded(const kernels::PairedHalfspaces& pairs) {
    const Eigen::Index n = pairs.normals.cols();
    std::vector<Eigen::Index> two_sided, one_plus, one_minus;
    for (Eigen::Index i = 0; i < pairs.pair_count(); ++i) {
        const bool up = std::isfinite(pairs.b_plus(i));
        const bool dn = std::isfinite(pairs.b_minus(i));
        if (up && dn) two_sided.push_back(i);
        else if (up) one_plus.push_back(i);
        else if (dn) one_minus.push_back(i);
    }
    Eigen::MatrixXd T(static_cast<Eigen::Index>(two_sided.size()), n);
    for (std::size_t t = 0; t < two_sided.size(); ++t)
        T.row(static_cast<Eigen::Index>(t)) = pairs.normals.row(two_sided[t]);
    if (normal_rank(T) == n) return;  // h.d = 0 for a full-rank set forces d = 0

    // basis of null(T)
    Eigen::MatrixXd N;
    if (T.rows() == 0) {
        N = Eigen::MatrixXd::Identity(n, n);
    } else {
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(T, Eigen::ComputeFullV);
        const Eigen::Index rk = normal_rank(T);
        N = svd.matrixV().rightCols(n - rk);
    }
    const Eigen::Index k = N.cols();

    // one-sided constraints projected onto the null space: u y <= 0
    Eigen::MatrixXd U(static_cast<Eigen::Index>(one_plus.size() + one_minus.size()), k);
    Eigen::Index at = 0;
    for (Eigen::Index i : one_plus) U.row(at++) = pairs.normals.row(i) * N;
    for (Eigen::Index i : one_minus) U.row(at++) = -pairs.normals.row(i) * N;
    // drop numerically zero rows
    std::vector<Eigen::Index> rows;
    for (Eigen::Index i = 0; i < U.rows(); ++i)
        if (U.row(i).norm() > 1e-12) rows.push_back(i);
    if (rows.empty())
        throw UnboundedError("vertex_enum: unbounded (free recession direction)");
    Eigen::MatrixXd Up(static_cast<Eigen::Index>(rows.size()), k);
    for (std::size_t t = 0; t < rows.size(); ++t) Up.row(static_cast<Eigen::Index>(t)) = U.row(rows[t]);

    if (normal_rank(Up) < k)
        throw UnboundedError("vertex_enum: unbounded (cone contains a line)");
    if (k == 1) {
        // pointed 1-D cone {y : u y <= 0}: nontrivial iff all u share a sign
        const bool pos = (Up.col(0).array() > 0).all();
        const bool neg = (Up.col(0).array() < 0).all();
        if (pos || neg) throw UnboundedError("vertex_enum: unbounded ray");
        return;
    }
    // extreme rays of the pointed cone from (k-1)-subsets of projected rows
    const Eigen::Index m = Up.rows();
    std::vector<int> idx(static_cast<std::size_t>(k - 1));
    std::iota(idx.begin(), idx.end(), 0);
    bool more = m >= k - 1;
    while (more) {
        Eigen::MatrixXd S(k - 1, k);
        for (Eigen::Index t = 0; t < k - 1; ++t) S.row(t) = Up.row(idx[static_cast<std::size_t>(t)]);
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(S, Eigen::ComputeFullV);
        if (svd.singularValues().size() == 0 ||
            svd.singularValues()(svd.singularValues().size() - 1) > 1e-10) {
            // rank k-1 exactly when the smallest of k-1 values is positive; the
            // null direction is the last right singular vector
        }
        const Eigen::VectorXd y = svd.matrixV().col(k - 1);
        for (int sgn : {1, -1}) {
            const Eigen::VectorXd ray = sgn * y;
            if ((Up * ray).maxCoeff() <= 1e-10)
                throw UnboundedError("vertex_enum: unbounded ray");
        }
        more = kernels::next_combination(idx.data(), m, k - 1);
    }
}

} // namespace

HalfspaceRep::HalfspaceRep(Eigen::MatrixXd normals, Eigen::VectorXd b_plus,
                           Eigen::VectorXd b_minus)
    : normals_(std::move(normals)), b_plus_(std::move(b_plus)), b_minus_(std::move(b_minus)) {
    if (normals_.rows() != b_plus_.size() || normals_.rows() != b_minus_.size())
        throw DimensionError("HalfspaceRep: offset count must match pair count");
}

Eigen::MatrixXd HalfspaceRep::H() const {
    Eigen::MatrixXd out(2 * pair_count(), dim());
    for (Eigen::Index i = 0; i < pair_count(); ++i) {
        out.row(2 * i) = normals_.row(i);
        out.row(2 * i + 1) = -normals_.row(i);
    }
    return out;
}

Eigen::VectorXd HalfspaceRep::b() const {
    Eigen::VectorXd out(2 * pair_count());
    for (Eigen::Index i = 0; i < pair_count(); ++i) {
        out(2 * i) = b_plus_(i);
        out(2 * i + 1) = b_minus_(i);
    }
    return out;
}

kernels::PairedHalfspaces HalfspaceRep::paired() const {
    return kernels::PairedHalfspaces{normals_, b_plus_, b_minus_};
}

HalfspaceRep halfspace_rep(const Zonotope& z, Exec exec) {
    const Eigen::Index n = z.dim();
    if (z.rank() < n)
        throw DegenerateZonotopeError("halfspace_rep: zonotope is not full-dimensional");
    const Eigen::MatrixXd N = kernels::facet_normals(z.generators(), exec);
    Eigen::VectorXd bp(N.rows()), bm(N.rows());
    for (Eigen::Index i = 0; i < N.rows(); ++i) {
        const double hc = N.row(i).dot(z.center());
        const double w = (N.row(i) * z.generators()).cwiseAbs().sum();
        bp(i) = hc + w;
        bm(i) = w - hc;
    }
    return HalfspaceRep(N, std::move(bp), std::move(bm));
}

std::vector<Strip> strips_of(const HalfspaceRep& h) {
    std::vector<Strip> out;
    out.reserve(static_cast<std::size_t>(h.pair_count()));
    for (Eigen::Index i = 0; i < h.pair_count(); ++i) {
        const double s = h.b_plus()(i) + h.b_minus()(i);
        const double scale = 1.0 + std::abs(h.b_plus()(i)) + std::abs(h.b_minus()(i));
        if (s <= tol::feas * scale)
            throw FlatSetError("strips_of: zero-width halfspace pair");
        out.push_back(Strip{2.0 * h.normals().row(i) / s,
                            (h.b_plus()(i) - h.b_minus()(i)) / s});
    }
    return out;
}

VertexSet vertex_enum(const HalfspaceRep& h, Exec exec) {
    if (normal_rank(h.normals()) < h.dim())
        throw UnboundedError("vertex_enum: halfspace pairs do not bound the set");
    return enumerate_pairs(kernels::dedup_pairs(h.paired()), exec);
}

VertexSet vertex_enum(const Eigen::MatrixXd& H, const Eigen::VectorXd& b, Exec exec) {
    if (H.rows() != b.size()) throw DimensionError("vertex_enum: row mismatch");
    const Eigen::Index n = H.cols();
    // normalize rows and stack into one-sided pairs, then merge antipodal rows
    kernels::PairedHalfspaces pairs;
    pairs.normals.resize(H.rows(), n);
    pairs.b_plus.resize(H.rows());
    pairs.b_minus.resize(H.rows());
    Eigen::Index at = 0;
    for (Eigen::Index i = 0; i < H.rows(); ++i) {
        const double nrm = H.row(i).norm();
        if (nrm <= 1e-14) {
            if (b(i) < -tol::feas)
                throw EmptyIntersectionError("vertex_enum: infeasible zero row");
            continue;
        }
        pairs.normals.row(at) = H.row(i) / nrm;
        pairs.b_plus(at) = b(i) / nrm;
        pairs.b_minus(at) = kInf;
        ++at;
    }
    pairs.normals.conservativeResize(at, n);
    pairs.b_plus.conservativeResize(at);
    pairs.b_minus.conservativeResize(at);
    const kernels::PairedHalfspaces merged = kernels::dedup_pairs(pairs);
    check_bounded(merged);
    return enumerate_pairs(merged, exec);
}

VertexSet intersection_vertices(const std::vector<Zonotope>& zonotopes, Exec exec) {
    if (zonotopes.empty())
        throw EmptySetError("intersection_vertices: no zonotopes");
    const Eigen::Index n = zonotopes.front().dim();
    std::vector<HalfspaceRep> reps;
    Eigen::Index total = 0;
    for (const auto& z : zonotopes) {
        if (z.dim() != n)
            throw DimensionError("intersection_vertices: mixed dimensions");
        reps.push_back(halfspace_rep(z, exec));
        total += reps.back().pair_count();
    }
    kernels::PairedHalfspaces all;
    all.normals.resize(total, n);
    all.b_plus.resize(total);
    all.b_minus.resize(total);
    Eigen::Index at = 0;
    for (const auto& r : reps) {
        all.normals.middleRows(at, r.pair_count()) = r.normals();
        all.b_plus.segment(at, r.pair_count()) = r.b_plus();
        all.b_minus.segment(at, r.pair_count()) = r.b_minus();
        at += r.pair_count();
    }
    return enumerate_pairs(kernels::dedup_pairs(all), exec);
}

std::vector<Strip> tight_strips(const Eigen::VectorXd& center, const HalfspaceRep& h,
                                const VertexSet& verts) {
    if (verts.count() == 0) throw EmptySetError("tight_strips: empty vertex set");
    if (!center.allFinite()) throw DimensionError("tight_strips: center not finite");
    std::vector<Strip> out;
    out.reserve(static_cast<std::size_t>(h.pair_count()));
    double vscale = 1.0 + center.cwiseAbs().maxCoeff();
    vscale = std::max(vscale, verts.vertices.cwiseAbs().maxCoeff());
    for (Eigen::Index i = 0; i < h.pair_count(); ++i) {
        const Eigen::RowVectorXd hi = h.normals().row(i);
        // farthest vertex, ties to lowest index
        double w = -1.0;
        for (Eigen::Index j = 0; j < verts.count(); ++j) {
            const double dist = std::abs(hi.dot(center - verts.vertices.col(j)));
            if (dist > w) w = dist;
        }
        if (w <= tol::feas * vscale)
            throw DegenerateStripError("tight_strips: all vertices on the center hyperplane");
        out.push_back(Strip{hi / w, hi.dot(center) / w});
    }
    return out;
}

Zonotope intersect_zonotope_strip(const Zonotope& z, const Strip& s) {
    if (s.normal.size() != z.dim())
        throw DimensionError("intersect_zonotope_strip: strip dimension mismatch");
    const Eigen::Index n = z.dim();
    const Eigen::MatrixXd& R = z.generators();
    const Eigen::RowVectorXd cR = s.normal * R;
    const double miss = std::abs(s.normal.dot(z.center()) - s.offset);
    if (cR.norm() <= 1e-14 * std::max(1.0, R.size() ? R.cwiseAbs().maxCoeff() : 0.0)) {
        if (miss > 1.0 + tol::feas * (1.0 + miss))
            throw EmptyIntersectionError("intersect_zonotope_strip: strip misses the zonotope");
        return z;
    }
    const Eigen::VectorXd Pc = R * cR.transpose();
    const double denom = cR.squaredNorm() + 1.0;
    const Eigen::VectorXd lambda = Pc / denom;
    Eigen::MatrixXd out(n, R.cols() + 1);
    out.leftCols(R.cols()) = (Eigen::MatrixXd::Identity(n, n) - lambda * s.normal) * R;
    out.col(R.cols()) = lambda;
    return Zonotope(z.center() + lambda * (s.offset - s.normal.dot(z.center())), std::move(out));
}

Zonotope symmetric_polygon_to_zonotope(const Eigen::VectorXd& center, const VertexSet& verts) {
    if (center.size() != 2 || verts.dim() != 2)
        throw DimensionError("symmetric_polygon_to_zonotope: planar only");
    const Eigen::MatrixXd V = kernels::dedup_points(verts.vertices);
    const Eigen::Index k = V.cols();
    if (k == 0) throw EmptySetError("symmetric_polygon_to_zonotope: no vertices");
    const double diam = std::max(1.0, (V.rowwise().maxCoeff() - V.rowwise().minCoeff()).norm());
    const double tolv = 1e-7 * diam;
    if (k == 1) {
        if ((V.col(0) - center).norm() > tolv)
            throw NotCentrallySymmetricError("symmetric_polygon_to_zonotope: single vertex off-center");
        return Zonotope::point(center);
    }
    if (k % 2 != 0)
        throw NotCentrallySymmetricError("symmetric_polygon_to_zonotope: odd vertex count");

    // ring order by angle about the center
    std::vector<Eigen::Index> order(static_cast<std::size_t>(k));
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> angle(static_cast<std::size_t>(k));
    for (Eigen::Index j = 0; j < k; ++j)
        angle[static_cast<std::size_t>(j)] = std::atan2(V(1, j) - center(1), V(0, j) - center(0));
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        return angle[static_cast<std::size_t>(a)] < angle[static_cast<std::size_t>(b)];
    });

    // every vertex must have its point reflection in the set
    for (Eigen::Index j = 0; j < k; ++j) {
        const Eigen::Vector2d refl = 2.0 * center - V.col(j);
        double best = kInf;
        for (Eigen::Index q = 0; q < k; ++q)
            best = std::min(best, (V.col(q) - refl).norm());
        if (best > tolv)
            throw NotCentrallySymmetricError("symmetric_polygon_to_zonotope: reflection missing");
    }

    Eigen::MatrixXd G(2, k / 2);
    for (Eigen::Index j = 0; j < k / 2; ++j) {
        const Eigen::Index a = order[static_cast<std::size_t>(j)];
        const Eigen::Index b2 = order[static_cast<std::size_t>((j + 1) % k)];
        G.col(j) = 0.5 * (V.col(b2) - V.col(a));
    }
    return Zonotope(center, std::move(G));
}

Zonotope realize_strip_intersection(const Eigen::VectorXd& center,
                                    const std::vector<Strip>& strips, Exec exec) {
    const Eigen::Index n = center.size();
    if (strips.empty()) throw EmptySetError("realize_strip_intersection: no strips");

    if (n == 2) {
        kernels::PairedHalfspaces pairs;
        pairs.normals.resize(static_cast<Eigen::Index>(strips.size()), n);
        pairs.b_plus.resize(static_cast<Eigen::Index>(strips.size()));
        pairs.b_minus.resize(static_cast<Eigen::Index>(strips.size()));
        for (std::size_t i = 0; i < strips.size(); ++i) {
            const double nrm = strips[i].normal.norm();
            pairs.normals.row(static_cast<Eigen::Index>(i)) = strips[i].normal / nrm;
            pairs.b_plus(static_cast<Eigen::Index>(i)) = (strips[i].offset + 1.0) / nrm;
            pairs.b_minus(static_cast<Eigen::Index>(i)) = (1.0 - strips[i].offset) / nrm;
        }
        const VertexSet verts = enumerate_pairs(kernels::dedup_pairs(pairs), exec);
        return symmetric_polygon_to_zonotope(center, verts);
    }

    // seed an exact parallelotope from the first n independent strip normals
    std::vector<std::size_t> seed;
    Eigen::MatrixXd Cm(n, n);
    for (std::size_t i = 0; i < strips.size() && static_cast<Eigen::Index>(seed.size()) < n; ++i) {
        Eigen::MatrixXd trial(static_cast<Eigen::Index>(seed.size()) + 1, n);
        for (std::size_t t = 0; t < seed.size(); ++t) trial.row(static_cast<Eigen::Index>(t)) = strips[seed[t]].normal;
        trial.row(static_cast<Eigen::Index>(seed.size())) = strips[i].normal;
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(trial);
        const auto& s = svd.singularValues();
        if (s(s.size() - 1) > 0.05 * s(0)) seed.push_back(i);
    }
    if (static_cast<Eigen::Index>(seed.size()) < n)
        throw DegenerateZonotopeError("realize_strip_intersection: strips do not span the space");
    Eigen::VectorXd d(n);
    for (Eigen::Index t = 0; t < n; ++t) {
        Cm.row(t) = strips[seed[static_cast<std::size_t>(t)]].normal;
        d(t) = strips[seed[static_cast<std::size_t>(t)]].offset;
    }
    const Eigen::MatrixXd Cinv = Cm.inverse();
    Zonotope acc(Cinv * d, Cinv);
    double vol = kernels::volume_subset_sum(acc.generators(), exec);

    // fold the remaining strips in index order; keep volume-non-increasing folds
    for (std::size_t i = 0; i < strips.size(); ++i) {
        if (std::find(seed.begin(), seed.end(), i) != seed.end()) continue;
        const Zonotope cand = intersect_zonotope_strip(acc, strips[i]);
        const double v = kernels::volume_subset_sum(cand.generators(), exec);
        if (v <= vol * (1.0 + 1e-12)) {
            acc = compact(cand);
            vol = v;
        }
    }
    return acc;
}

} // namespace zonofuse
