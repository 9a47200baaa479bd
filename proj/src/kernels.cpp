#include "zonofuse/kernels.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>

namespace zonofuse::kernels {

namespace {

constexpr int kMaxDim = 8;
constexpr double kInf = std::numeric_limits<double>::infinity();

// In-place LU with partial pivoting on a stack matrix; returns det (0 on
// numerical singularity). perm holds the pivot rows for solves.
struct SmallLU {
    double a[kMaxDim][kMaxDim];
    int perm[kMaxDim];
    int n = 0;
    double det = 0.0;

    bool factor(int dim) {
        n = dim;
        double d = 1.0;
        for (int k = 0; k < n; ++k) {
            int piv = k;
            double best = std::abs(a[k][k]);
            for (int i = k + 1; i < n; ++i) {
                const double v = std::abs(a[i][k]);
                if (v > best) { best = v; piv = i; }
            }
            perm[k] = piv;
            if (piv != k) {
                for (int j = 0; j < n; ++j) std::swap(a[k][j], a[piv][j]);
                d = -d;
            }
            const double p = a[k][k];
            if (p == 0.0) { det = 0.0; return false; }
            d *= p;
            const double inv = 1.0 / p;
            for (int i = k + 1; i < n; ++i) {
                const double f = a[i][k] * inv;
                a[i][k] = f;
                for (int j = k + 1; j < n; ++j) a[i][j] -= f * a[k][j];
            }
        }
        det = d;
        return true;
    }

    void solve(const double* rhs, double* x) const {
        for (int i = 0; i < n; ++i) x[i] = rhs[i];
        for (int k = 0; k < n; ++k) {
            if (perm[k] != k) std::swap(x[k], x[perm[k]]);
            for (int i = k + 1; i < n; ++i) x[i] -= a[i][k] * x[k];
        }
        for (int i = n - 1; i >= 0; --i) {
            for (int j = i + 1; j < n; ++j) x[i] -= a[i][j] * x[j];
            x[i] /= a[i][i];
        }
    }
};

double small_det(double m[kMaxDim][kMaxDim], int n) {
    if (n == 1) return m[0][0];
    if (n == 2) return m[0][0] * m[1][1] - m[0][1] * m[1][0];
    if (n == 3)
        return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
             - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
             + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    SmallLU lu;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) lu.a[i][j] = m[i][j];
    lu.factor(n);
    return lu.det;
}

// Generalized cross product of the n-1 columns R[:, idx]: vector orthogonal
// to all of them, magnitude = their (n-1)-volume.
void cross_normal(const Eigen::MatrixXd& R, const int* idx, int n, double* h) {
    double minor[kMaxDim][kMaxDim];
    for (int i = 0; i < n; ++i) {
        int rr = 0;
        for (int row = 0; row < n; ++row) {
            if (row == i) continue;
            for (int col = 0; col < n - 1; ++col) minor[rr][col] = R(row, idx[col]);
            ++rr;
        }
        const double d = (n == 1) ? 1.0 : small_det(minor, n - 1);
        h[i] = ((i & 1) == 0) ? d : -d;
    }
}

void canonical_sign(double* h, int n) {
    int arg = 0;
    double best = std::abs(h[0]);
    for (int i = 1; i < n; ++i)
        if (std::abs(h[i]) > best) { best = std::abs(h[i]); arg = i; }
    if (h[arg] < 0.0)
        for (int i = 0; i < n; ++i) h[i] = -h[i];
}

} // namespace

std::int64_t binomial(std::int64_t m, std::int64_t k) {
    if (k < 0 || k > m) return 0;
    k = std::min(k, m - k);
    std::int64_t r = 1;
    for (std::int64_t i = 1; i <= k; ++i) r = r * (m - k + i) / i;
    return r;
}

void unrank_combination(std::int64_t rank, std::int64_t m, std::int64_t k, int* idx) {
    std::int64_t x = 0;
    for (std::int64_t i = 0; i < k; ++i) {
        while (binomial(m - 1 - x, k - 1 - i) <= rank) {
            rank -= binomial(m - 1 - x, k - 1 - i);
            ++x;
        }
        idx[i] = static_cast<int>(x++);
    }
}

bool next_combination(int* idx, std::int64_t m, std::int64_t k) {
    for (std::int64_t i = k - 1; i >= 0; --i) {
        if (idx[i] < m - k + i) {
            ++idx[i];
            for (std::int64_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
            return true;
        }
    }
    return false;
}

double volume_subset_sum(const Eigen::MatrixXd& R, Exec exec) {
    const int n = static_cast<int>(R.rows());
    const std::int64_t r = R.cols();
    if (r < n || n == 0) return 0.0;
    const std::int64_t total = binomial(r, n);

    // small enumerations accumulate straight in subset order; the blocked
    // path below reproduces exactly this order within and across blocks
    if (total <= 4096) {
        int idx[kMaxDim];
        for (int i = 0; i < n; ++i) idx[i] = i;
        double acc = 0.0;
        double m[kMaxDim][kMaxDim];
        for (std::int64_t t = 0;; ) {
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) m[i][j] = R(i, idx[j]);
            acc += std::abs(small_det(m, n));
            if (++t >= total) break;
            next_combination(idx, r, n);
        }
        return acc;
    }

    const std::int64_t nblocks = (total + kBlock - 1) / kBlock;
    std::vector<double> partial(static_cast<std::size_t>(nblocks), 0.0);
    const bool par = exec == Exec::parallel;

#pragma omp parallel for schedule(dynamic) if (par)
    for (std::int64_t blk = 0; blk < nblocks; ++blk) {
        const std::int64_t lo = blk * kBlock;
        const std::int64_t hi = std::min(total, lo + kBlock);
        int idx[kMaxDim];
        unrank_combination(lo, r, n, idx);
        double acc = 0.0;
        double m[kMaxDim][kMaxDim];
        for (std::int64_t t = lo; t < hi; ++t) {
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) m[i][j] = R(i, idx[j]);
            acc += std::abs(small_det(m, n));
            if (t + 1 < hi) next_combination(idx, r, n);
        }
        partial[static_cast<std::size_t>(blk)] = acc;
    }
    double sum = 0.0;
    for (double p : partial) sum += p;
    return sum;
}

Eigen::MatrixXd facet_normals(const Eigen::MatrixXd& R, Exec exec) {
    const int n = static_cast<int>(R.rows());
    const std::int64_t r = R.cols();
    if (n == 1) {
        Eigen::MatrixXd one(1, 1);
        one(0, 0) = 1.0;
        return one;
    }
    const std::int64_t k = n - 1;
    if (r < k) return Eigen::MatrixXd(0, n);
    const std::int64_t total = binomial(r, k);
    const std::int64_t nblocks = (total + kBlock - 1) / kBlock;
    std::vector<std::vector<double>> out(static_cast<std::size_t>(nblocks));
    const bool par = exec == Exec::parallel && total > 4096;

    Eigen::VectorXd colnorm(r);
    for (std::int64_t j = 0; j < r; ++j) colnorm(j) = R.col(j).norm();

#pragma omp parallel for schedule(dynamic) if (par)
    for (std::int64_t blk = 0; blk < nblocks; ++blk) {
        const std::int64_t lo = blk * kBlock;
        const std::int64_t hi = std::min(total, lo + kBlock);
        int idx[kMaxDim];
        unrank_combination(lo, r, k, idx);
        auto& buf = out[static_cast<std::size_t>(blk)];
        double h[kMaxDim];
        for (std::int64_t t = lo; t < hi; ++t) {
            double scale = 1.0;
            for (int j = 0; j < k; ++j) scale *= colnorm(idx[j]);
            if (scale > 0.0) {
                cross_normal(R, idx, n, h);
                double nrm = 0.0;
                for (int i = 0; i < n; ++i) nrm += h[i] * h[i];
                nrm = std::sqrt(nrm);
                if (nrm > 1e-12 * scale) {
                    const double inv = 1.0 / nrm;
                    for (int i = 0; i < n; ++i) h[i] *= inv;
                    canonical_sign(h, n);
                    buf.insert(buf.end(), h, h + n);
                }
            }
            if (t + 1 < hi) next_combination(idx, r, k);
        }
    }

    // sequential dedup in enumeration order
    std::vector<double> kept;
    std::int64_t count = 0;
    for (const auto& buf : out) {
        for (std::size_t at = 0; at < buf.size(); at += static_cast<std::size_t>(n)) {
            const double* h = buf.data() + at;
            bool dup = false;
            for (std::int64_t q = 0; q < count && !dup; ++q) {
                const double* g = kept.data() + q * n;
                double dm = 0.0, dp = 0.0;
                for (int i = 0; i < n; ++i) {
                    dm = std::max(dm, std::abs(h[i] - g[i]));
                    dp = std::max(dp, std::abs(h[i] + g[i]));
                }
                dup = (dm <= tol::angular) || (dp <= tol::angular);
            }
            if (!dup) {
                kept.insert(kept.end(), h, h + n);
                ++count;
            }
        }
    }
    Eigen::MatrixXd N(count, n);
    for (std::int64_t q = 0; q < count; ++q)
        for (int i = 0; i < n; ++i) N(q, i) = kept[static_cast<std::size_t>(q * n + i)];
    return N;
}

bool point_in_zonotope(const Eigen::VectorXd& c, const Eigen::MatrixXd& R,
                       const Eigen::VectorXd& x, double tolerance, Exec exec) {
    const int n = static_cast<int>(R.rows());
    const std::int64_t r = R.cols();
    const Eigen::VectorXd delta = x - c;
    if (n == 1) {
        const double w = R.cwiseAbs().sum();
        return std::abs(delta(0)) <= w + tolerance * (1.0 + w + std::abs(delta(0)));
    }
    const std::int64_t k = n - 1;
    if (r < k) return delta.norm() <= tolerance * (1.0 + delta.norm());
    const std::int64_t total = binomial(r, k);
    const std::int64_t nblocks = (total + kBlock - 1) / kBlock;
    const double dscale = delta.norm();

    Eigen::VectorXd colnorm(r);
    for (std::int64_t j = 0; j < r; ++j) colnorm(j) = R.col(j).norm();

    std::atomic<bool> outside{false};
    const bool par = exec == Exec::parallel && total > 4096;
#pragma omp parallel for schedule(dynamic) if (par)
    for (std::int64_t blk = 0; blk < nblocks; ++blk) {
        if (outside.load(std::memory_order_relaxed)) continue;
        const std::int64_t lo = blk * kBlock;
        const std::int64_t hi = std::min(total, lo + kBlock);
        int idx[kMaxDim];
        unrank_combination(lo, r, k, idx);
        double h[kMaxDim];
        for (std::int64_t t = lo; t < hi; ++t) {
            double scale = 1.0;
            for (int j = 0; j < k; ++j) scale *= colnorm(idx[j]);
            if (scale > 0.0) {
                cross_normal(R, idx, n, h);
                double nrm = 0.0;
                for (int i = 0; i < n; ++i) nrm += h[i] * h[i];
                nrm = std::sqrt(nrm);
                if (nrm > 1e-12 * scale) {
                    double hd = 0.0;
                    for (int i = 0; i < n; ++i) hd += h[i] * delta(i);
                    double w = 0.0;
                    for (std::int64_t j = 0; j < r; ++j) {
                        double hr = 0.0;
                        for (int i = 0; i < n; ++i) hr += h[i] * R(i, j);
                        w += std::abs(hr);
                    }
                    if (std::abs(hd) > w + tolerance * nrm * (1.0 + w / nrm + dscale)) {
                        outside.store(true, std::memory_order_relaxed);
                        break;
                    }
                }
            }
            if (t + 1 < hi) next_combination(idx, r, k);
        }
    }
    return !outside.load();
}

PairedHalfspaces dedup_pairs(const PairedHalfspaces& hs) {
    const Eigen::Index eps = hs.pair_count();
    const Eigen::Index n = hs.normals.cols();
    std::vector<Eigen::Index> keep;
    Eigen::VectorXd bp = hs.b_plus, bm = hs.b_minus;
    for (Eigen::Index i = 0; i < eps; ++i) {
        bool merged = false;
        for (Eigen::Index kq : keep) {
            const double dm = (hs.normals.row(i) - hs.normals.row(kq)).cwiseAbs().maxCoeff();
            const double dp = (hs.normals.row(i) + hs.normals.row(kq)).cwiseAbs().maxCoeff();
            if (dm <= tol::angular) {
                bp(kq) = std::min(bp(kq), bp(i));
                bm(kq) = std::min(bm(kq), bm(i));
                merged = true;
                break;
            }
            if (dp <= tol::angular) {
                bp(kq) = std::min(bp(kq), bm(i));
                bm(kq) = std::min(bm(kq), bp(i));
                merged = true;
                break;
            }
        }
        if (!merged) keep.push_back(i);
    }
    PairedHalfspaces out;
    out.normals.resize(static_cast<Eigen::Index>(keep.size()), n);
    out.b_plus.resize(static_cast<Eigen::Index>(keep.size()));
    out.b_minus.resize(static_cast<Eigen::Index>(keep.size()));
    for (std::size_t t = 0; t < keep.size(); ++t) {
        out.normals.row(static_cast<Eigen::Index>(t)) = hs.normals.row(keep[t]);
        out.b_plus(static_cast<Eigen::Index>(t)) = bp(keep[t]);
        out.b_minus(static_cast<Eigen::Index>(t)) = bm(keep[t]);
    }
    return out;
}

Eigen::MatrixXd vertex_candidates(const PairedHalfspaces& hs, double feas_tol, Exec exec) {
    const int n = static_cast<int>(hs.normals.cols());
    const std::int64_t eps = hs.pair_count();
    if (eps < n) return Eigen::MatrixXd(n, 0);
    const std::int64_t total = binomial(eps, n);
    const std::int64_t blockSubsets = std::max<std::int64_t>(1, kBlock / (std::int64_t{1} << n));
    const std::int64_t nblocks = (total + blockSubsets - 1) / blockSubsets;
    std::vector<std::vector<double>> out(static_cast<std::size_t>(nblocks));
    const bool par = exec == Exec::parallel && total > 512;

#pragma omp parallel for schedule(dynamic) if (par)
    for (std::int64_t blk = 0; blk < nblocks; ++blk) {
        const std::int64_t lo = blk * blockSubsets;
        const std::int64_t hi = std::min(total, lo + blockSubsets);
        int idx[kMaxDim];
        unrank_combination(lo, eps, n, idx);
        auto& buf = out[static_cast<std::size_t>(blk)];
        for (std::int64_t t = lo; t < hi; ++t) {
            SmallLU lu;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) lu.a[i][j] = hs.normals(idx[i], j);
            double scale = 1.0;  // unit rows
            if (lu.factor(n) && std::abs(lu.det) > 1e-12 * scale) {
                double rhs[kMaxDim], xx[kMaxDim];
                for (int signs = 0; signs < (1 << n); ++signs) {
                    bool usable = true;
                    for (int i = 0; i < n && usable; ++i) {
                        const double b = (signs >> i & 1) ? -hs.b_minus(idx[i]) : hs.b_plus(idx[i]);
                        usable = std::isfinite(b);
                        rhs[i] = b;
                    }
                    if (!usable) continue;
                    lu.solve(rhs, xx);
                    bool feas = true;
                    for (std::int64_t p = 0; p < eps && feas; ++p) {
                        double hx = 0.0;
                        for (int i = 0; i < n; ++i) hx += hs.normals(p, i) * xx[i];
                        const double up = hs.b_plus(p), lo2 = hs.b_minus(p);
                        if (std::isfinite(up) && hx > up + feas_tol * (1.0 + std::abs(up))) feas = false;
                        if (std::isfinite(lo2) && -hx > lo2 + feas_tol * (1.0 + std::abs(lo2))) feas = false;
                    }
                    if (feas) buf.insert(buf.end(), xx, xx + n);
                }
            }
            if (t + 1 < hi) next_combination(idx, eps, n);
        }
    }
    std::size_t count = 0;
    for (const auto& b : out) count += b.size() / static_cast<std::size_t>(n);
    Eigen::MatrixXd V(n, static_cast<Eigen::Index>(count));
    Eigen::Index at = 0;
    for (const auto& b : out)
        for (std::size_t q = 0; q < b.size(); q += static_cast<std::size_t>(n), ++at)
            for (int i = 0; i < n; ++i) V(i, at) = b[q + static_cast<std::size_t>(i)];
    return V;
}

Eigen::MatrixXd dedup_points(const Eigen::MatrixXd& pts) {
    if (pts.cols() == 0) return pts;
    const Eigen::VectorXd lo = pts.rowwise().minCoeff();
    const Eigen::VectorXd hi = pts.rowwise().maxCoeff();
    const double diam = std::max(1.0, (hi - lo).norm());
    const double tolv = tol::dedup * diam;
    std::vector<Eigen::Index> keep;
    for (Eigen::Index j = 0; j < pts.cols(); ++j) {
        bool dup = false;
        for (Eigen::Index q : keep) {
            if ((pts.col(j) - pts.col(q)).cwiseAbs().maxCoeff() <= tolv) { dup = true; break; }
        }
        if (!dup) keep.push_back(j);
    }
    Eigen::MatrixXd out(pts.rows(), static_cast<Eigen::Index>(keep.size()));
    for (std::size_t t = 0; t < keep.size(); ++t) out.col(static_cast<Eigen::Index>(t)) = pts.col(keep[t]);
    return out;
}

} // namespace zonofuse::kernels
